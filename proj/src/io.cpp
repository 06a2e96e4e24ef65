#include "tsl/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tsl {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json real_json(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

void Table::add_row(std::vector<Json> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("Table: row width does not match the columns");
  rows.push_back(std::move(row));
}

TableFormat parse_format(const std::string& name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "json") return TableFormat::json;
  throw std::invalid_argument("unknown table format: " + name);
}

namespace {

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "nan";
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number_float()) return format_real(v.get<double>());
  if (v.is_number()) return v.dump();
  const std::string s = v.get<std::string>();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::string emit_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
    out += "\n";
  }
  return out;
}

Json table_json(const Table& t) {
  Json arr = Json::array();
  for (const auto& row : t.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = row[i];
    arr.push_back(std::move(obj));
  }
  return arr;
}

std::string emit_table(const Table& t, TableFormat format) {
  if (format == TableFormat::csv) return emit_csv(t);
  return table_json(t).dump(2) + "\n";
}

Table phi_table(const std::vector<PhiPoint>& points) {
  Table t{{"T", "regime", "s", "phi", "yT", "asymptoteExcess"}, {}};
  for (const auto& p : points)
    t.add_row({real_json(p.T), family_name(p.regime), real_json(p.s), real_json(p.phi), real_json(p.yT),
               real_json(p.asymptoteExcess)});
  return t;
}

Table gap_table(const std::vector<GapResult>& gaps) {
  Table t{{"m1", "t1", "m2", "t2", "T1", "T2", "lhs", "rhs", "gap", "errBound"}, {}};
  for (const auto& g : gaps) {
    const SplitSpec& s = g.spec;
    t.add_row({real_json(s.m1), real_json(s.t1), real_json(s.m2), real_json(s.t2), real_json(s.T1), real_json(s.T2),
               real_json(g.lhs), real_json(g.rhs), real_json(g.gap), real_json(g.errBound)});
  }
  return t;
}

Table identity_table(const std::vector<IdentityCheck>& checks) {
  Table t{{"T", "s", "residual", "condition", "extended"}, {}};
  for (const auto& c : checks)
    t.add_row({real_json(c.T), real_json(c.s), real_json(c.residual), real_json(c.condition), c.extended});
  return t;
}

Table stability_table(const std::vector<StabilityRow>& rows) {
  Table t{{"epsilon", "T", "delta", "distance", "ratio", "ratioDefined", "converged"}, {}};
  for (const auto& r : rows)
    t.add_row({real_json(r.epsilon), real_json(r.T), real_json(r.delta), real_json(r.distance),
               real_json(r.ratioDefined ? r.ratio : std::nan("")), r.ratioDefined, r.converged});
  return t;
}

Table split_energy_table(const std::vector<SplitEnergyRow>& rows) {
  Table t{{"R", "wEnergy", "excess", "aboveInfimum", "massResidual", "traceResidual"}, {}};
  for (const auto& r : rows)
    t.add_row({real_json(r.R), real_json(r.wEnergy), real_json(r.excess), real_json(r.aboveInfimum),
               real_json(r.massResidual), real_json(r.traceResidual)});
  return t;
}

Table curve_plot_data(const CurveScan& scan, const FundamentalConstants& c, const Params& P) {
  Table t{{"T", "phi", "escobar", "floor", "asymptote"}, {}};
  for (const auto& p : scan.points)
    t.add_row({real_json(p.T), real_json(p.phi), real_json(c.E * p.T), real_json(c.sobolevFloor),
               real_json(std::pow(p.T, P.pSharp) / P.pSharp)});
  return t;
}

Table stability_plot_data(const std::vector<StabilityRow>& rows) {
  Table t{{"epsilon", "delta", "distance", "ratio"}, {}};
  for (const auto& r : rows)
    t.add_row({real_json(r.epsilon), real_json(r.delta), real_json(r.distance),
               real_json(r.ratioDefined ? r.ratio : std::nan(""))});
  return t;
}

Json constants_json(const FundamentalConstants& c) {
  Json j = Json::object();
  j["S"] = real_json(c.S);
  j["E"] = real_json(c.E);
  j["TE"] = real_json(c.TE);
  j["T0"] = real_json(c.T0);
  j["floor"] = real_json(c.sobolevFloor);
  j["phiTE"] = real_json(c.phiTE);
  if (c.TStarEstimate > 0.0) {
    j["TStarEstimate"] = real_json(c.TStarEstimate);
    j["TStarError"] = real_json(c.TStarError);
  }
  return j;
}

Json split_json(const SplitConstruction& sc) {
  Json j = Json::object();
  const SplitSpec& s = sc.spec;
  j["spec"] = {{"T", real_json(s.T)},   {"m1", real_json(s.m1)}, {"m2", real_json(s.m2)}, {"t1", real_json(s.t1)},
               {"t2", real_json(s.t2)}, {"T1", real_json(s.T1)}, {"T2", real_json(s.T2)}};
  j["R"] = real_json(sc.R);
  j["sep"] = real_json(sc.sep);
  Json pieces = Json::array();
  for (const auto& p : sc.pieces)
    pieces.push_back({{"role", p.role},
                      {"offset", real_json(p.offset)},
                      {"lpStarMass", real_json(p.lpStarMass)},
                      {"traceMass", real_json(p.traceMass)},
                      {"gradEnergy", real_json(p.gradEnergy)}});
  j["pieces"] = pieces;
  j["massShortfall"] = real_json(sc.massShortfall);
  j["traceShortfall"] = real_json(sc.traceShortfall);
  j["shortfallBelow10Percent"] = sc.shortfallBelow10Percent;
  j["wEnergy"] = real_json(sc.wEnergy);
  j["rhs"] = real_json(sc.rhs);
  j["lhs"] = real_json(sc.lhs);
  j["massResidual"] = real_json(sc.massResidual);
  j["traceResidual"] = real_json(sc.traceResidual);
  j["lowerHalfMass"] = real_json(sc.lowerHalfMass);
  j["correctionSolved"] = sc.correctionSolved;
  j["correctionNote"] = sc.correctionNote;
  return j;
}

Json plan_json(const TransportPlan& plan) {
  Json entries = Json::array();
  for (const auto& e : plan.entries) entries.push_back(Json::array({e.source, e.target, real_json(e.mass)}));
  Json j = Json::object();
  j["entries"] = entries;
  j["cost"] = real_json(plan.cost);
  return j;
}

Json cone_json(const ConeStats& st) {
  Json j = Json::object();
  j["upperMass"] = real_json(st.upperMass);
  j["lowerMass"] = real_json(st.lowerMass);
  j["muE"] = real_json(st.muE);
  j["muF"] = real_json(st.muF);
  j["muEstar"] = real_json(st.muEstar);
  j["muFstar"] = real_json(st.muFstar);
  j["bBar"] = real_json(st.bBar);
  j["epsilon"] = real_json(st.epsilon);
  j["excisedTarget"] = real_json(st.excisedTarget);
  j["excisedSource"] = real_json(st.excisedSource);
  j["goodMass"] = real_json(st.goodMass);
  j["goodStarMass"] = real_json(st.goodStarMass);
  return j;
}

void ResultEnvelope::certify(const std::string& name, bool pass, const std::string& detail) {
  certificates.push_back({name, pass, detail});
  if (!pass) warnings.push_back("certificate failed: " + name + (detail.empty() ? "" : " (" + detail + ")"));
}

bool ResultEnvelope::all_pass() const {
  for (const auto& c : certificates)
    if (!c.pass) return false;
  return true;
}

std::string deterministic_timestamp() {
  long long secs = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    const std::string s(env);
    const auto r = std::from_chars(s.data(), s.data() + s.size(), secs);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || secs < 0)
      throw std::invalid_argument("SOURCE_DATE_EPOCH must be a nonnegative integer");
  }
  const std::time_t t = static_cast<std::time_t>(secs);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json envelope_json(const ResultEnvelope& env) {
  Json j = Json::object();
  j["toolVersion"] = env.toolVersion;
  j["configEcho"] = env.configEcho;
  j["timestamp"] = env.timestamp;
  j["records"] = env.records;
  Json certs = Json::array();
  for (const auto& c : env.certificates) certs.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  j["certificates"] = certs;
  j["warnings"] = env.warnings;
  return j;
}

ResultEnvelope envelope_from_json(const Json& j) {
  ResultEnvelope env;
  env.toolVersion = j.at("toolVersion").get<std::string>();
  env.configEcho = j.at("configEcho");
  env.timestamp = j.at("timestamp").get<std::string>();
  env.records = j.at("records");
  for (const auto& c : j.at("certificates"))
    env.certificates.push_back({c.at("name").get<std::string>(), c.at("pass").get<bool>(), c.at("detail").get<std::string>()});
  env.warnings = j.at("warnings").get<std::vector<std::string>>();
  return env;
}

std::string emit_envelope(const ResultEnvelope& env) { return envelope_json(env).dump(2) + "\n"; }

ResultEnvelope parse_envelope(const std::string& text) { return envelope_from_json(Json::parse(text)); }

namespace {

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw std::invalid_argument("grid must be lo:hi:count, got '" + spec + "'");
  const double lo = parse_real(parts[0]), hi = parse_real(parts[1]);
  int count = 0;
  const auto r = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), count);
  if (r.ec != std::errc() || r.ptr != parts[2].data() + parts[2].size() || count < 1)
    throw std::invalid_argument("grid count must be a positive integer, got '" + parts[2] + "'");
  if (!std::isfinite(lo) || !std::isfinite(hi) || (count > 1 && !(hi > lo)))
    throw std::invalid_argument("grid needs finite lo < hi, got '" + spec + "'");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  if (count > 1) out.back() = hi;
  return out;
}

std::vector<double> parse_list(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_real(item));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  f.close();
  if (!f) throw std::runtime_error("failed writing " + path);
}

}  // namespace tsl
