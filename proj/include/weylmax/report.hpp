#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "weylmax/divset.hpp"
#include "weylmax/experiment.hpp"

namespace weylmax {

/// %.17g, with "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double v);

/// Compact JSON where every floating value round-trips (17 significant digits).
/// Non-finite numbers are written as null.
std::string dump_json(const nlohmann::ordered_json& j);

/// {"artifact": "weylmax", "version": ..., "config": config}.
nlohmann::ordered_json output_header(const nlohmann::ordered_json& config);

/// Header line for CSV outputs: "# " followed by the header JSON.
void write_header_line(std::ostream& os, const nlohmann::ordered_json& config);

inline constexpr const char* kRowColumns = "N,Q,J,measure,measure_err,sup_lb,hs_norm,ratio,wall_ms";

/// Failed rows are written with ratio = nan.
void write_rows_csv(std::ostream& os, const std::vector<ExperimentRow>& rows,
                    const nlohmann::ordered_json& config);

struct RowsFile {
  nlohmann::ordered_json header;
  std::vector<ExperimentRow> rows;
};

RowsFile read_rows_csv(std::istream& is);

/// Columns q,b1,...,bd.
void write_balls_csv(std::ostream& os, const DivergenceSet& x, const nlohmann::ordered_json& config);

struct BallsFile {
  nlohmann::ordered_json header;
  std::size_t d = 0;
  std::vector<Ball> balls;
};

BallsFile read_balls_csv(std::istream& is);

nlohmann::ordered_json to_json(const MeasureResult& m);
nlohmann::ordered_json to_json(const ExperimentRow& r);
nlohmann::ordered_json to_json(const FitResult& f);
nlohmann::ordered_json to_json(const DeligneReport& r);
nlohmann::ordered_json to_json(const Witness& w);

}  // namespace weylmax
