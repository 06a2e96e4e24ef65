#pragma once

#include "tsl/binding_gap.hpp"
#include "tsl/phi_curve.hpp"
#include "tsl/split_construction.hpp"
#include "tsl/stability.hpp"
#include "tsl/transport.hpp"
#include "tsl/transport_probe.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace tsl {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

/// Real number with 17 significant digits; "nan", "inf", "-inf" for
/// non-finite values.
std::string format_real(double x);

/// Finite reals as numbers, non-finite ones as null.
Json real_json(double x);

/// Homogeneous records with a fixed column order.  Cells hold numbers,
/// strings, booleans or null.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;

  void add_row(std::vector<Json> row);
};

enum class TableFormat { csv, json };
TableFormat parse_format(const std::string& name);

std::string emit_csv(const Table& t);
/// Array of objects keyed by column, one per row.
Json table_json(const Table& t);
std::string emit_table(const Table& t, TableFormat format);

Table phi_table(const std::vector<PhiPoint>& points);
Table gap_table(const std::vector<GapResult>& gaps);
Table identity_table(const std::vector<IdentityCheck>& checks);
Table stability_table(const std::vector<StabilityRow>& rows);
Table split_energy_table(const std::vector<SplitEnergyRow>& rows);

/// Curve with the overlays E*T, S/2^{1/n} and T^{p#}/p#.
Table curve_plot_data(const CurveScan& scan, const FundamentalConstants& constants, const Params& params);
/// (epsilon, delta, distance, ratio) series of a stability scan.
Table stability_plot_data(const std::vector<StabilityRow>& rows);

Json constants_json(const FundamentalConstants& c);
Json split_json(const SplitConstruction& sc);
/// {entries: [[i, j, mass]], cost}.
Json plan_json(const TransportPlan& plan);
Json cone_json(const ConeStats& st);

struct Certificate {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Output of one command.  The timestamp is taken from SOURCE_DATE_EPOCH
/// (seconds since the epoch, default 0) so repeated runs are byte-identical.
struct ResultEnvelope {
  std::string toolVersion = kToolVersion;
  Json configEcho = Json::object();
  std::string timestamp;
  Json records = Json::object();
  std::vector<Certificate> certificates;
  std::vector<std::string> warnings;

  /// Adds the certificate and a warning naming it when it fails.
  void certify(const std::string& name, bool pass, const std::string& detail = {});
  bool all_pass() const;
};

std::string deterministic_timestamp();
Json envelope_json(const ResultEnvelope& env);
ResultEnvelope envelope_from_json(const Json& j);
/// Two-space indented JSON followed by a newline.
std::string emit_envelope(const ResultEnvelope& env);
ResultEnvelope parse_envelope(const std::string& text);

/// "lo:hi:count" to count evenly spaced values (count = 1 gives lo).
std::vector<double> parse_grid(const std::string& spec);
/// Comma-separated reals.
std::vector<double> parse_list(const std::string& spec);

/// Writes text to path; throws std::runtime_error on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace tsl
