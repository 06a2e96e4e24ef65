#pragma once

#include "tsl/io.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace tsl {

/// Every command's parameters.  Fields irrelevant to a command are ignored
/// and left out of its config echo.
struct RunConfig {
  std::string command;
  int n = 3;
  double p = 2.0;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: TSL_THREADS or the OpenMP default
  std::string out;    // envelope path; stdout when empty
  std::string table;  // optional flat table path
  std::string plot;   // optional plot-data path
  std::string format = "csv";

  std::string tGrid;       // lo:hi:count; empty for the command default
  std::string level = "T0";  // trace level: a number or k*T0 / k*TE written as "T0", "3TE", "0.5T0"
  int gridRes = 32;
  double margin = 0.05;
  double m1 = 0.0;  // 0: symmetric split
  double t1 = 0.0;
  std::string rSchedule = "4,8,16,32,64";
  double splitR = 4.0;
  std::string sepSchedule = "2.5,3.5,5";  // multiples of splitR
  std::size_t atoms = 2000;
  double slope = 0.1;
  std::size_t instances = 100;
  bool deficitSuite = false;
  std::string mode = "dilationBlend";
  std::string epsGrid = "0.02:0.2:10";
  double alphaT = 0.0;  // > 0 adds the gluing report with this local constant
  double delta0 = 0.5;
};

struct CommandResult {
  ResultEnvelope envelope;
  Table table;  // written to RunConfig::table when requested
  Table plot;   // written to RunConfig::plot when requested
};

/// Default T grids: geometric from T0/20 to 30 TE with 200 points (curve) and
/// from T0/4 to 10 TE with 20 points (identity).
std::vector<double> geometric_grid(double lo, double hi, int count);

/// Resolves a trace level such as "1.3", "T0", "TE" or "3TE".
double resolve_level(const std::string& level, const FundamentalConstants& c);

CommandResult run_constants(const RunConfig& cfg);
CommandResult run_curve(const RunConfig& cfg);
CommandResult run_identity(const RunConfig& cfg);
CommandResult run_binding(const RunConfig& cfg);
CommandResult run_split(const RunConfig& cfg);
CommandResult run_transport(const RunConfig& cfg);
CommandResult run_stability(const RunConfig& cfg);
/// Reduced-size pass over every module in one envelope.
CommandResult run_report(const RunConfig& cfg);

/// Dispatches cfg.command; writes the envelope (and any table or plot file)
/// and returns 0 when every certificate passes, 2 otherwise.
int execute(const RunConfig& cfg, std::ostream& out);

/// Parses argv and runs the command.  Exit status 0 on success, 1 on usage
/// or configuration errors, 2 on any failed certificate.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tsl
