#include "tnorm/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tnorm/numfmt.hpp"
#include "tnorm/tensor_io.hpp"

namespace tnorm {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t end = line.find(sep, pos);
    fields.push_back(line.substr(pos, end == std::string_view::npos ? end : end - pos));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return fields;
}

template <typename Int>
Int parse_int(std::string_view text) {
  Int value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("cannot parse integer '" + std::string(text) + "'");
  return value;
}

std::string optional_field(const std::optional<double>& v) { return v ? fmt_double(*v) : ""; }

// Plain JSON number, or null for non-finite values.
nlohmann::ordered_json number(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string records_to_csv(const std::vector<TrialRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : records) {
    out += r.shape.to_string();
    out += ';';
    out += r.model;
    out += ';';
    out += std::to_string(r.seed);
    out += ';';
    if (r.failed) {
      out += "failed;;;";
    } else {
      out += fmt_double(r.norm_lower);
      out += ';';
      out += optional_field(r.norm_upper);
      out += ';';
      out += fmt_double(r.bound_theorem1);
      out += ';';
      out += optional_field(r.bound_corollary);
    }
    out += ';';
    out += std::to_string(r.wall_time_ms);
    out += '\n';
  }
  return out;
}

std::vector<TrialRecord> records_from_csv(std::string_view text) {
  std::vector<TrialRecord> records;
  std::size_t pos = 0;
  bool header = true;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (header) {
      if (line != kCsvHeader) throw std::runtime_error("trials CSV: unexpected header");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    const auto f = split(line, ';');
    if (f.size() != 8)
      throw std::runtime_error("trials CSV line " + std::to_string(line_no) + ": expected 8 fields");
    try {
      TrialRecord r;
      r.shape = Shape::parse(f[0]);
      r.model = std::string(f[1]);
      r.seed = parse_int<std::uint64_t>(f[2]);
      if (f[3] == "failed") {
        r.failed = true;
      } else {
        r.norm_lower = parse_double(f[3]);
        if (!f[4].empty()) r.norm_upper = parse_double(f[4]);
        r.bound_theorem1 = parse_double(f[5]);
        if (!f[6].empty()) r.bound_corollary = parse_double(f[6]);
      }
      r.wall_time_ms = parse_int<std::int64_t>(f[7]);
      records.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error("trials CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (header) throw std::runtime_error("trials CSV: missing header");
  return records;
}

nlohmann::ordered_json summary_to_json(const ScalingSummary& summary) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = 1;
  doc["failures"] = summary.failures;
  doc["shapes"] = nlohmann::ordered_json::array();
  for (const auto& s : summary.shapes) {
    nlohmann::ordered_json e;
    e["shape"] = s.shape.dims();
    e["sqrt_sum_dims"] = number(s.sqrt_sum_dims);
    e["trials"] = s.trials;
    e["failures"] = s.failures;
    e["mean"] = number(s.mean);
    e["median"] = number(s.median);
    e["q95"] = number(s.q95);
    e["bound"] = number(s.bound);
    e["ratio"] = number(s.ratio);
    e["exceedances"] = s.exceedances;
    e["exceedance_fraction"] = number(s.exceedance_fraction);
    doc["shapes"].push_back(std::move(e));
  }
  if (summary.regression.defined) {
    doc["regression"] = {{"x", "sqrt_sum_dims"},
                         {"y", "mean_norm_lower"},
                         {"slope", number(summary.regression.slope)},
                         {"intercept", number(summary.regression.intercept)},
                         {"r2", number(summary.regression.r2)}};
  } else {
    doc["regression"] = nullptr;
  }
  return doc;
}

std::string render_svg(const ScalingSummary& summary) {
  constexpr double width = 640, height = 420;
  constexpr double left = 70, right = 170, top = 30, bottom = 60;
  constexpr double plot_w = width - left - right, plot_h = height - top - bottom;

  struct Series {
    const char* name;
    const char* color;
    const char* dash;
    double ShapeSummary::*field;
  };
  const Series series[] = {
      {"mean norm", "#1f77b4", "", &ShapeSummary::mean},
      {"q95 norm", "#ff7f0e", "", &ShapeSummary::q95},
      {"bound", "#d62728", "6,4", &ShapeSummary::bound},
  };

  std::vector<const ShapeSummary*> pts;
  for (const auto& s : summary.shapes)
    if (s.trials > 0) pts.push_back(&s);
  std::stable_sort(pts.begin(), pts.end(), [](const ShapeSummary* a, const ShapeSummary* b) {
    return a->sqrt_sum_dims < b->sqrt_sum_dims;
  });

  double xmin = 0.0, xmax = 1.0, ymax = 1.0;
  if (!pts.empty()) {
    xmin = pts.front()->sqrt_sum_dims;
    xmax = pts.back()->sqrt_sum_dims;
    for (const auto* p : pts)
      for (const auto& s : series)
        if (std::isfinite(p->*s.field)) ymax = std::max(ymax, p->*s.field);
  }
  if (xmax - xmin < 1e-9) {
    xmin -= 1.0;
    xmax += 1.0;
  }
  ymax *= 1.05;
  auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
  auto sy = [&](double y) { return top + plot_h - y / ymax * plot_h; };
  auto f2 = [](double v) { return fmt_fixed(v, 2); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f2(width) << "\" height=\""
      << f2(height) << "\" viewBox=\"0 0 " << f2(width) << ' ' << f2(height) << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << f2(width) << "\" height=\"" << f2(height)
      << "\" fill=\"white\"/>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  // Axes.
  svg << "<line x1=\"" << f2(left) << "\" y1=\"" << f2(top + plot_h) << "\" x2=\""
      << f2(left + plot_w) << "\" y2=\"" << f2(top + plot_h) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << f2(left) << "\" y1=\"" << f2(top) << "\" x2=\"" << f2(left)
      << "\" y2=\"" << f2(top + plot_h) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 5.0;
    const double yv = ymax * i / 5.0;
    svg << "<line x1=\"" << f2(sx(xv)) << "\" y1=\"" << f2(top + plot_h) << "\" x2=\""
        << f2(sx(xv)) << "\" y2=\"" << f2(top + plot_h + 5) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << f2(sx(xv)) << "\" y=\"" << f2(top + plot_h + 20)
        << "\" text-anchor=\"middle\">" << fmt_fixed(xv, 2) << "</text>\n";
    svg << "<line x1=\"" << f2(left - 5) << "\" y1=\"" << f2(sy(yv)) << "\" x2=\"" << f2(left)
        << "\" y2=\"" << f2(sy(yv)) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << f2(left - 8) << "\" y=\"" << f2(sy(yv) + 4)
        << "\" text-anchor=\"end\">" << fmt_fixed(yv, 1) << "</text>\n";
  }
  svg << "<text x=\"" << f2(left + plot_w / 2) << "\" y=\"" << f2(height - 15)
      << "\" text-anchor=\"middle\">sqrt(sum of dimensions)</text>\n";
  svg << "<text x=\"18\" y=\"" << f2(top + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << f2(top + plot_h / 2) << ")\">spectral norm</text>\n";

  for (const auto& s : series) {
    std::string path;
    for (const auto* p : pts) {
      const double v = p->*s.field;
      if (!std::isfinite(v)) continue;
      if (!path.empty()) path += ' ';
      path += f2(sx(p->sqrt_sum_dims)) + "," + f2(sy(v));
    }
    if (path.empty()) continue;
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
    if (*s.dash) svg << " stroke-dasharray=\"" << s.dash << "\"";
    svg << " points=\"" << path << "\"/>\n";
    for (const auto* p : pts) {
      const double v = p->*s.field;
      if (!std::isfinite(v)) continue;
      svg << "<circle cx=\"" << f2(sx(p->sqrt_sum_dims)) << "\" cy=\"" << f2(sy(v))
          << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
    }
  }

  // Legend.
  double ly = top + 10;
  for (const auto& s : series) {
    const double lx = left + plot_w + 20;
    svg << "<line x1=\"" << f2(lx) << "\" y1=\"" << f2(ly) << "\" x2=\"" << f2(lx + 30)
        << "\" y2=\"" << f2(ly) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
    if (*s.dash) svg << " stroke-dasharray=\"" << s.dash << "\"";
    svg << "/>\n<text x=\"" << f2(lx + 38) << "\" y=\"" << f2(ly + 4) << "\">" << s.name
        << "</text>\n";
    ly += 20;
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> write_report(const std::vector<TrialRecord>& records,
                                                const ScalingSummary& summary,
                                                const std::filesystem::path& dir,
                                                ReportFormats formats) {
  if (records.empty()) throw std::invalid_argument("cannot write a report without records");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  if (formats.csv) {
    written.push_back(dir / "trials.csv");
    io::write_file(written.back(), records_to_csv(records));
  }
  if (formats.json) {
    written.push_back(dir / "summary.json");
    io::write_file(written.back(), summary_to_json(summary).dump(2) + "\n");
  }
  if (formats.svg) {
    written.push_back(dir / "scaling.svg");
    io::write_file(written.back(), render_svg(summary));
  }
  return written;
}

}  // namespace tnorm
