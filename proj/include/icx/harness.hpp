#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "icx/bootstrap.hpp"
#include "icx/distributions.hpp"
#include "icx/empirical.hpp"

namespace icx {

inline constexpr const char* kVersion = "1.0.0";

/// Malformed input file; carries the 1-based line number (0 if not line-specific).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Which field of a delimited line to read: 1-based index or header name.
struct ColumnSelector {
  std::optional<std::size_t> index;
  std::optional<std::string> name;
  static ColumnSelector parse(const std::string& text);
};

/// Reads one value per line, ignoring blank lines and '#' comments. With a
/// column selector, lines are split on commas or whitespace and a leading
/// non-numeric line is taken as a header.
Sample read_sample_text(const std::string& text, const std::optional<ColumnSelector>& column = {});
Sample read_sample(const std::filesystem::path& path,
                   const std::optional<ColumnSelector>& column = {});

struct PowerStudySpec {
  std::vector<std::pair<DistributionSpec, DistributionSpec>> pairs;
  std::vector<std::pair<std::size_t, std::size_t>> sizes;  // (m, n)
  double alpha = 0.05;
  std::size_t replications = 1000;
  std::size_t resamples = 1000;
  ResamplingScheme scheme = ResamplingScheme::Switched;
  std::uint64_t seed = 0;
  unsigned threads = 0;

  void validate() const;
  /// {"pairs": [["exp(1)", "exp(1)"], ...], "sizes": [[50, 50], ...],
  ///  "alpha": 0.05, "replications": 1000, "resamples": 1000,
  ///  "scheme": "switched", "seed": 42, "threads": 0}
  /// The seed is required.
  static PowerStudySpec from_json(const nlohmann::json& j);
};

struct PowerCell {
  DistributionSpec f;
  DistributionSpec g;
  std::size_t m = 0;
  std::size_t n = 0;
  StatKind kind = StatKind::KS;
  std::size_t rejections = 0;
  std::size_t replications = 0;
  double wall_time_seconds = 0.0;

  double rate() const noexcept;
  double standard_error() const noexcept;
};

struct PowerStudyResult {
  std::vector<PowerCell> cells;  // per (pair, size): KS row then CvM row
};

/// Draws replication r of cell c from streams keyed by (seed, c, r) and runs
/// both tests on it. Deterministic for a given spec at any thread count.
PowerStudyResult power_study(const PowerStudySpec& spec);

/// Rejection counts for one (F, G, m, n) cell; index `cell` keys the streams.
std::pair<std::size_t, std::size_t> power_cell(const DistributionSpec& f, const DistributionSpec& g,
                                               std::size_t m, std::size_t n,
                                               const PowerStudySpec& spec, std::size_t cell);

struct Table1Row {
  double alpha = 0.0;
  double c_switched = 0.0;
  double c_proportional = 0.0;
  double reject_switched = 0.0;
  double reject_proportional = 0.0;
};

/// Limiting critical values of the KS test in the two-point example under
/// both resampling schemes and the resulting rejection probabilities.
std::vector<Table1Row> table1(double tau, std::span<const double> alphas);

enum class ReportFormat { Json, Tsv };

nlohmann::json to_json(const TestReport& r, bool timing = true);
TestReport test_report_from_json(const nlohmann::json& j);
std::string write_report(std::span<const TestReport> reports, ReportFormat format,
                         bool timing = true);
std::string write_report(const PowerStudyResult& result, ReportFormat format, bool timing = true);
std::string write_report(std::span<const Table1Row> rows, ReportFormat format);
nlohmann::json to_json(const Classification& c, const DistributionSpec& f,
                       const DistributionSpec& g, double tau);

/// Command-line entry point: subcommands test, power, table1, classify.
/// Returns 0 on success, 1 on usage errors, 2 on data errors.
int cli_main(int argc, const char* const* argv);
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace icx
