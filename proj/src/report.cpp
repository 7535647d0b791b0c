#include "weylmax/report.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "weylmax/errors.hpp"

namespace weylmax {

namespace {

using json = nlohmann::ordered_json;

void write_string(std::string& out, const std::string& s) {
  out += json(s).dump();
}

void write_value(std::string& out, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        write_string(out, key);
        out += ':';
        write_value(out, value);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        write_value(out, j[i]);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      break;
    }
    default:
      out += j.dump();
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& cell, std::size_t line_no) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  require(!cell.empty() && end == cell.c_str() + cell.size(), ErrorKind::parse,
          "line " + std::to_string(line_no) + ": bad number '" + cell + "'");
  return v;
}

std::int64_t parse_int(const std::string& cell, std::size_t line_no) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(!cell.empty() && used == cell.size(), ErrorKind::parse,
          "line " + std::to_string(line_no) + ": bad integer '" + cell + "'");
  return v;
}

// Reads the optional "# {json}" line and the column line.
json read_preamble(std::istream& is, std::string& columns, std::size_t& line_no) {
  json header = json::object();
  std::string line;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto brace = line.find('{');
      if (brace != std::string::npos) {
        try {
          header = json::parse(line.substr(brace));
        } catch (const json::parse_error& e) {
          fail(ErrorKind::parse, "line " + std::to_string(line_no) + ": bad header JSON: " + e.what());
        }
      }
      continue;
    }
    columns = line;
    return header;
  }
  fail(ErrorKind::parse, "missing CSV column line");
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump_json(const json& j) {
  std::string out;
  write_value(out, j);
  return out;
}

json output_header(const json& config) {
  return json{{"artifact", "weylmax"}, {"version", WEYLMAX_VERSION}, {"config", config}};
}

void write_header_line(std::ostream& os, const json& config) {
  os << "# " << dump_json(output_header(config)) << '\n';
}

void write_rows_csv(std::ostream& os, const std::vector<ExperimentRow>& rows, const json& config) {
  write_header_line(os, config);
  os << kRowColumns << '\n';
  for (const ExperimentRow& r : rows) {
    const double ratio = r.failed ? std::nan("") : r.ratio;
    os << r.N << ',' << r.Q << ',' << r.J << ',' << format_double(r.measure) << ','
       << format_double(r.measure_err) << ',' << format_double(r.sup_lb) << ','
       << format_double(r.hs_norm) << ',' << format_double(ratio) << ',' << format_double(r.wall_ms)
       << '\n';
  }
}

RowsFile read_rows_csv(std::istream& is) {
  RowsFile out;
  std::string columns;
  std::size_t line_no = 0;
  out.header = read_preamble(is, columns, line_no);
  require(columns == kRowColumns, ErrorKind::parse,
          "unexpected columns '" + columns + "', want '" + kRowColumns + "'");
  std::string line;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv(line);
    require(cells.size() == 9, ErrorKind::parse,
            "line " + std::to_string(line_no) + ": expected 9 columns, got " + std::to_string(cells.size()));
    ExperimentRow r;
    r.N = parse_int(cells[0], line_no);
    r.Q = parse_int(cells[1], line_no);
    r.J = static_cast<std::uint64_t>(parse_int(cells[2], line_no));
    r.measure = parse_double(cells[3], line_no);
    r.measure_err = parse_double(cells[4], line_no);
    r.sup_lb = parse_double(cells[5], line_no);
    r.hs_norm = parse_double(cells[6], line_no);
    r.ratio = parse_double(cells[7], line_no);
    r.wall_ms = parse_double(cells[8], line_no);
    r.failed = !std::isfinite(r.ratio);
    out.rows.push_back(std::move(r));
  }
  return out;
}

void write_balls_csv(std::ostream& os, const DivergenceSet& x, const json& config) {
  write_header_line(os, config);
  os << 'q';
  for (std::size_t i = 1; i <= x.d; ++i) os << ",b" << i;
  os << '\n';
  for (const Ball& ball : x.balls) {
    os << ball.q;
    for (std::int64_t bi : ball.b) os << ',' << bi;
    os << '\n';
  }
}

BallsFile read_balls_csv(std::istream& is) {
  BallsFile out;
  std::string columns;
  std::size_t line_no = 0;
  out.header = read_preamble(is, columns, line_no);
  const auto names = split_csv(columns);
  require(names.size() >= 2 && names[0] == "q", ErrorKind::parse, "ball CSV must have columns q,b1,...");
  for (std::size_t i = 1; i < names.size(); ++i)
    require(names[i] == "b" + std::to_string(i), ErrorKind::parse, "unexpected column '" + names[i] + "'");
  out.d = names.size() - 1;
  std::string line;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv(line);
    require(cells.size() == names.size(), ErrorKind::parse,
            "line " + std::to_string(line_no) + ": wrong column count");
    Ball ball;
    ball.q = parse_int(cells[0], line_no);
    for (std::size_t i = 1; i < cells.size(); ++i) ball.b.push_back(parse_int(cells[i], line_no));
    out.balls.push_back(std::move(ball));
  }
  return out;
}

json to_json(const MeasureResult& m) {
  json j{{"method", m.method},           {"estimate", m.estimate},       {"stderr", m.error},
         {"upper_bound", m.upper_bound}, {"lower_bound", m.lower_bound}, {"J", m.J},
         {"overlap_pairs", m.overlap_pairs}};
  if (m.method == "montecarlo") {
    j["samples"] = m.samples;
    j["low_sample_warning"] = m.low_sample_warning;
  }
  return j;
}

json to_json(const Witness& w) {
  return json{{"q", w.q}, {"b", w.b}, {"delta", w.delta}, {"t", 1.0 / static_cast<double>(w.q)},
              {"value", w.value}};
}

json to_json(const ExperimentRow& r) {
  json j{{"N", r.N},
         {"Q", r.Q},
         {"d", r.d},
         {"k", r.k},
         {"s", r.s},
         {"J", r.J},
         {"measure", r.measure},
         {"measure_err", r.measure_err},
         {"measure_method", r.measure_method},
         {"sup_lb", r.sup_lb},
         {"hs_norm", r.hs_norm},
         {"ratio", r.ratio},
         {"wall_ms", r.wall_ms},
         {"failed", r.failed}};
  if (!r.failed) j["witness"] = to_json(r.witness);
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

json to_json(const FitResult& f) {
  return json{{"slope", f.slope},
              {"intercept", f.intercept},
              {"residual", f.residual},
              {"n_points", f.n_points},
              {"log_corrected_slope", f.log_corrected_slope}};
}

json to_json(const DeligneReport& r) {
  return json{{"max_modulus", r.max_modulus},
              {"bound", r.bound},
              {"ok", r.ok},
              {"bound_general", r.bound_general},
              {"ok_general", r.ok_general}};
}

}  // namespace weylmax
