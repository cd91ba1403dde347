// SPDX-License-Identifier: Apache-2.0
#include "gfd/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gfd/errors.hpp"
#include "gfd/textio.hpp"

namespace gfd {
namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw FileError("cannot write " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw FileError("write failed for " + path);
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string ramp_color(double v) {
  v = std::clamp(v, 0.0, 1.0);
  // white toward a deep blue, one hue so intensity reads as magnitude
  const int r = static_cast<int>(std::lround(255.0 - v * (255.0 - 8.0)));
  const int g = static_cast<int>(std::lround(255.0 - v * (255.0 - 81.0)));
  const int b = static_cast<int>(std::lround(255.0 - v * (255.0 - 156.0)));
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string f1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

std::string f2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

void write_scalogram_csv(const Scalogram& sc, const std::string& path) {
  auto out = open_out(path);
  out << "scale";
  for (Index b = 0; b < sc.signal_len; ++b) out << ',' << b;
  out << '\n';
  for (Index row = 0; row < sc.grid.size(); ++row) {
    out << format_double(sc.grid.scales[row]);
    for (Index b = 0; b < sc.signal_len; ++b) {
      out << ',' << format_double(sc.coefficients(row, b));
    }
    out << '\n';
  }
  finish(out, path);
}

void write_trace_csv(const ScaleTrace& tr, const std::string& path) {
  auto out = open_out(path);
  out << "center_index,scale,objective_value\n";
  for (std::size_t i = 0; i < tr.centers.size(); ++i) {
    out << tr.centers[i] << ',' << format_double(tr.selected_scales[static_cast<Index>(i)]) << ','
        << format_double(tr.objective_values[static_cast<Index>(i)]) << '\n';
  }
  finish(out, path);
}

void write_imfset_csv(const ImfSet& set, const std::string& path) {
  auto out = open_out(path);
  for (std::size_t k = 0; k < set.imfs.size(); ++k) out << "imf" << k + 1 << ',';
  out << "residual\n";
  for (Index t = 0; t < set.residual.size(); ++t) {
    for (const Vec& imf : set.imfs) out << format_double(imf[t]) << ',';
    out << format_double(set.residual[t]) << '\n';
  }
  finish(out, path);
}

void write_features_csv(const std::vector<FeatureVector>& features, const std::string& path) {
  if (features.empty()) throw std::invalid_argument("no features to write");
  const Index dim = features.front().levels.size();
  auto out = open_out(path);
  for (Index i = 0; i < dim; ++i) out << 'f' << i + 1 << ',';
  out << "label\n";
  for (const FeatureVector& fv : features) {
    if (fv.levels.size() != dim) throw std::invalid_argument("feature dimensions differ");
    for (Index i = 0; i < dim; ++i) out << format_double(fv.levels[i]) << ',';
    out << fv.label << '\n';
  }
  finish(out, path);
}

std::vector<FeatureVector> load_features_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open " + path);

  std::vector<FeatureVector> out;
  std::string line;
  std::size_t row = 0;
  Index dim = -1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() < 2) throw ParseError("row " + std::to_string(row) + " of " + path + ": need values and a label");

    FeatureVector fv;
    fv.levels.resize(static_cast<Index>(fields.size()) - 1);
    bool numeric = true;
    for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
      double v;
      if (!parse_double(fields[i], v)) {
        numeric = false;
        break;
      }
      fv.levels[static_cast<Index>(i)] = v;
    }
    if (!numeric) {
      if (out.empty() && dim < 0) continue;  // header row
      throw ParseError("row " + std::to_string(row) + " of " + path + ": bad number");
    }
    if (dim < 0) {
      dim = fv.levels.size();
    } else if (fv.levels.size() != dim) {
      throw ParseError("row " + std::to_string(row) + " of " + path + ": ragged width");
    }
    fv.label = fields.back();
    fv.provenance = "file";
    out.push_back(std::move(fv));
  }
  if (out.empty()) throw DataError(path + " holds no feature rows");
  return out;
}

void write_heatmap_svg(const Scalogram& sc, const ScaleTrace* trace, const std::string& title,
                       const std::string& path) {
  const Index S = sc.grid.size();
  const Index n = sc.signal_len;
  const Index bins = std::min<Index>(n, 400);

  const double ml = 56, mt = 30, mr = 14, mb = 42;
  const double pw = 720, ph = 360;
  const double width = ml + pw + mr, height = mt + ph + mb;
  const double cell_w = pw / static_cast<double>(bins);
  const double cell_h = ph / static_cast<double>(S);

  const double vmax = sc.coefficients.cwiseAbs().maxCoeff();

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << ml << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">"
      << xml_escape(title) << "</text>\n";

  for (Index row = 0; row < S; ++row) {
    const double y = mt + ph - static_cast<double>(row + 1) * cell_h;
    for (Index bin = 0; bin < bins; ++bin) {
      const Index lo = bin * n / bins;
      const Index hi = std::max(lo + 1, (bin + 1) * n / bins);
      double v = 0.0;
      for (Index b = lo; b < hi; ++b) v = std::max(v, std::abs(sc.coefficients(row, b)));
      const std::string color = ramp_color(vmax > 0.0 ? v / vmax : 0.0);
      out << "<rect x=\"" << f1(ml + static_cast<double>(bin) * cell_w) << "\" y=\"" << f1(y)
          << "\" width=\"" << f1(cell_w + 0.5) << "\" height=\"" << f1(cell_h + 0.5)
          << "\" fill=\"" << color << "\"/>\n";
    }
  }

  if (trace != nullptr && !trace->centers.empty()) {
    const std::size_t stride = std::max<std::size_t>(1, trace->centers.size() / 400);
    for (std::size_t i = 0; i < trace->centers.size(); i += stride) {
      const Index row = sc.grid.index_of(trace->selected_scales[static_cast<Index>(i)]);
      if (row < 0) continue;
      const double cx = ml + (static_cast<double>(trace->centers[i]) + 0.5) / static_cast<double>(n) * pw;
      const double cy = mt + ph - (static_cast<double>(row) + 0.5) * cell_h;
      out << "<circle cx=\"" << f1(cx) << "\" cy=\"" << f1(cy)
          << "\" r=\"1.6\" fill=\"white\"/>\n";
    }
  }

  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 10
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">time (samples)</text>\n";
  out << "<text x=\"16\" y=\"" << mt + ph / 2
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << mt + ph / 2 << ")\">scale</text>\n";
  out << "<text x=\"" << ml - 4 << "\" y=\"" << mt + ph
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
      << format_double(sc.grid.scales[0]) << "</text>\n";
  out << "<text x=\"" << ml - 4 << "\" y=\"" << mt + 10
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
      << format_double(sc.grid.scales[S - 1]) << "</text>\n";
  out << "<text x=\"" << ml << "\" y=\"" << mt + ph + 14
      << "\" font-family=\"sans-serif\" font-size=\"11\">0</text>\n";
  out << "<text x=\"" << ml + pw << "\" y=\"" << mt + ph + 14
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << n - 1
      << "</text>\n";
  out << "</svg>\n";
  finish(out, path);
}

void write_trace_svg(const ScaleTrace& tr, const ScaleGrid& grid, const std::string& title,
                     const std::string& path) {
  if (tr.centers.empty()) throw std::invalid_argument("empty scale trace");
  const double ml = 56, mt = 30, mr = 14, mb = 42;
  const double pw = 720, ph = 300;
  const double width = ml + pw + mr, height = mt + ph + mb;

  const double smin = grid.scales[0];
  const double smax = grid.scales[grid.size() - 1];
  const double c0 = static_cast<double>(tr.centers.front());
  const double c1 = static_cast<double>(tr.centers.back());
  const double cspan = std::max(1.0, c1 - c0);
  const double sspan = std::max(1e-12, smax - smin);

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << ml << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">"
      << xml_escape(title) << "</text>\n";
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#333\"/>\n";

  out << "<polyline fill=\"none\" stroke=\"#08519c\" stroke-width=\"1\" points=\"";
  for (std::size_t i = 0; i < tr.centers.size(); ++i) {
    const double x = ml + (static_cast<double>(tr.centers[i]) - c0) / cspan * pw;
    const double y = mt + ph - (tr.selected_scales[static_cast<Index>(i)] - smin) / sspan * ph;
    out << f1(x) << ',' << f1(y) << ' ';
  }
  out << "\"/>\n";

  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 10
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">frame center (samples)</text>\n";
  out << "<text x=\"16\" y=\"" << mt + ph / 2
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << mt + ph / 2 << ")\">selected scale</text>\n";
  out << "<text x=\"" << ml - 4 << "\" y=\"" << mt + ph
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << format_double(smin)
      << "</text>\n";
  out << "<text x=\"" << ml - 4 << "\" y=\"" << mt + 10
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << format_double(smax)
      << "</text>\n";
  out << "<text x=\"" << ml << "\" y=\"" << mt + ph + 14
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << tr.centers.front() << "</text>\n";
  out << "<text x=\"" << ml + pw << "\" y=\"" << mt + ph + 14
      << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << tr.centers.back()
      << "</text>\n";
  out << "</svg>\n";
  finish(out, path);
}

void save_model_json(const MulticlassModel& mm, const std::string& path) {
  if (mm.models.empty()) throw std::invalid_argument("empty model");
  nlohmann::ordered_json doc;
  doc["format"] = "gfd-linear-svm";
  doc["version"] = 1;
  doc["feature_dim"] = mm.models.front().w.size();
  doc["classes"] = nlohmann::ordered_json::array();
  for (std::size_t c = 0; c < mm.models.size(); ++c) {
    const LinearSvmModel& m = mm.models[c];
    nlohmann::ordered_json jc;
    jc["name"] = mm.class_names[c];
    jc["w"] = std::vector<double>(m.w.data(), m.w.data() + m.w.size());
    jc["b"] = m.b;
    jc["c"] = m.c_used;
    jc["passes"] = m.passes;
    jc["kkt_violation"] = m.kkt_violation;
    jc["support_count"] = mm.models[c].support_indices.size();
    doc["classes"].push_back(std::move(jc));
  }
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

MulticlassModel load_model_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }

  try {
    if (doc.at("format").get<std::string>() != "gfd-linear-svm") {
      throw ParseError(path + ": not a gfd-linear-svm model");
    }
    if (doc.at("version").get<int>() != 1) {
      throw ParseError(path + ": unsupported model version");
    }
    const Index dim = doc.at("feature_dim").get<Index>();
    MulticlassModel mm;
    for (const auto& jc : doc.at("classes")) {
      mm.class_names.push_back(jc.at("name").get<std::string>());
      LinearSvmModel m;
      const auto w = jc.at("w").get<std::vector<double>>();
      if (static_cast<Index>(w.size()) != dim) {
        throw ParseError(path + ": class weight length disagrees with feature_dim");
      }
      m.w = Eigen::Map<const Vec>(w.data(), static_cast<Index>(w.size()));
      m.b = jc.at("b").get<double>();
      m.c_used = jc.value("c", 0.0);
      m.passes = jc.value("passes", Index{0});
      m.kkt_violation = jc.value("kkt_violation", 0.0);
      mm.models.push_back(std::move(m));
    }
    if (mm.models.empty()) throw ParseError(path + ": model has no classes");
    return mm;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string success_table_text(const std::string& heading, const SuccessReport& rep) {
  std::ostringstream out;
  out << heading << '\n';
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %14s %14s %14s %14s\n", "condition", "train-ova(%)",
                "test-ova(%)", "train-recall(%)", "test-recall(%)");
  out << line;
  for (const ClassStats& st : rep.per_class) {
    std::snprintf(line, sizeof(line), "%-12s %14s %14s %14s %14s\n", st.name.c_str(),
                  f2(st.train_binary_pct).c_str(), f2(st.test_binary_pct).c_str(),
                  f2(st.train_recall_pct).c_str(), f2(st.test_recall_pct).c_str());
    out << line;
  }
  std::snprintf(line, sizeof(line), "%-12s train %s   test %s\n", "overall",
                f2(rep.train_overall_pct).c_str(), f2(rep.test_overall_pct).c_str());
  out << line;
  return out.str();
}

std::string success_table_csv(const std::string& heading, const SuccessReport& rep) {
  std::ostringstream out;
  for (const ClassStats& st : rep.per_class) {
    out << heading << ',' << st.name << ",train,ova_accuracy," << f2(st.train_binary_pct) << '\n';
    out << heading << ',' << st.name << ",test,ova_accuracy," << f2(st.test_binary_pct) << '\n';
    out << heading << ',' << st.name << ",train,recall," << f2(st.train_recall_pct) << '\n';
    out << heading << ',' << st.name << ",test,recall," << f2(st.test_recall_pct) << '\n';
  }
  out << heading << ",overall,train,multiclass_accuracy," << f2(rep.train_overall_pct) << '\n';
  out << heading << ",overall,test,multiclass_accuracy," << f2(rep.test_overall_pct) << '\n';
  return out.str();
}

}  // namespace gfd
