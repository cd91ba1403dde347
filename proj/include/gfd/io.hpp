// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "gfd/cwt.hpp"
#include "gfd/emd.hpp"
#include "gfd/features.hpp"
#include "gfd/svm.hpp"

namespace gfd {

/// Matrix CSV: header row of time indices, first column the scale value.
void write_scalogram_csv(const Scalogram& sc, const std::string& path);

/// Rows of center_index,scale,objective_value.
void write_trace_csv(const ScaleTrace& tr, const std::string& path);

/// Columns imf1..imfK,residual; one sample per row.
void write_imfset_csv(const ImfSet& set, const std::string& path);

/// Rows of feature values with the label in the last column. Every number
/// is written at full round-trip precision, so equal inputs give
/// byte-identical files.
void write_features_csv(const std::vector<FeatureVector>& features, const std::string& path);
std::vector<FeatureVector> load_features_csv(const std::string& path);

/// Heatmap of |W| on a white-to-blue ramp, scale on the vertical axis,
/// time on the horizontal. When a trace is given its selected scales are
/// overdrawn as white markers.
void write_heatmap_svg(const Scalogram& sc, const ScaleTrace* trace, const std::string& title,
                       const std::string& path);

/// Selected scale against frame center as a line plot.
void write_trace_svg(const ScaleTrace& tr, const ScaleGrid& grid, const std::string& title,
                     const std::string& path);

/// Versioned JSON with feature dimension, class names and per-class (w, b)
/// plus solver metadata. Loading restores enough for classification.
void save_model_json(const MulticlassModel& mm, const std::string& path);
MulticlassModel load_model_json(const std::string& path);

/// Aligned text table of per-class and overall success percentages.
std::string success_table_text(const std::string& heading, const SuccessReport& rep);

/// The same numbers as CSV rows: heading,class,split,metric,value.
std::string success_table_csv(const std::string& heading, const SuccessReport& rep);

}  // namespace gfd
