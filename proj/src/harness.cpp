#include "icx/harness.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "icx/limit_analytics.hpp"
#include "icx/numeric.hpp"

namespace icx {

namespace {

constexpr std::uint64_t kDataTag = 0x64617461ULL;   // "data"
constexpr std::uint64_t kStudyTag = 0x73747564ULL;  // "stud"

// Flag values that parse but make no sense (alpha = 0.7, ...).
class UsageError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> to_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool comma = line.find(',') != std::string::npos;
  for (char c : line) {
    const bool sep = comma ? c == ',' : (c == ' ' || c == '\t');
    if (sep) {
      if (comma || !cur.empty()) out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (comma || !cur.empty()) out.push_back(trim(cur));
  return out;
}

std::string fmt_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool replication_rejects(const DistributionSpec& f, const DistributionSpec& g, std::size_t m,
                         std::size_t n, const PowerStudySpec& spec, std::size_t cell,
                         std::size_t r, bool& ks, bool& cvm) {
  RandomStream xs(spec.seed, derive_id({kDataTag, cell, r, 0}));
  RandomStream ys(spec.seed, derive_id({kDataTag, cell, r, 1}));
  const Sample x = sample_n(f, m, xs);
  const Sample y = sample_n(g, n, ys);
  BootstrapConfig cfg;
  cfg.replicates = spec.resamples;
  cfg.alpha = spec.alpha;
  cfg.scheme = spec.scheme;
  cfg.seed = derive_id({kStudyTag, spec.seed, cell, r});
  cfg.threads = 1;
  const auto reports = run_test(x, y, StatSelection::Both, cfg);
  ks = reports[0].reject;
  cvm = reports[1].reject;
  return true;
}

}  // namespace

// ---------------------------------------------------------------- input

ColumnSelector ColumnSelector::parse(const std::string& text) {
  ColumnSelector sel;
  std::size_t idx = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), idx);
  if (res.ec == std::errc() && res.ptr == text.data() + text.size()) {
    if (idx == 0) throw std::invalid_argument("column index is 1-based");
    sel.index = idx;
  } else {
    sel.name = text;
  }
  return sel;
}

Sample read_sample_text(const std::string& text, const std::optional<ColumnSelector>& column) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::size_t> field = column && column->index ? std::optional(*column->index - 1)
                                                              : std::nullopt;
  bool first_data_line = true;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;

    std::string token = content;
    if (column) {
      const auto fields = split_fields(content);
      if (first_data_line && column->name) {
        const auto it = std::find(fields.begin(), fields.end(), *column->name);
        if (it == fields.end())
          throw ParseError("line " + std::to_string(lineno) + ": no column named '" +
                               *column->name + "' in header",
                           lineno);
        field = static_cast<std::size_t>(it - fields.begin());
        first_data_line = false;
        continue;
      }
      if (!field || *field >= fields.size())
        throw ParseError("line " + std::to_string(lineno) + ": missing column", lineno);
      token = fields[*field];
      if (first_data_line && !to_number(token)) {
        first_data_line = false;  // header line
        continue;
      }
    }
    first_data_line = false;
    const auto v = to_number(token);
    if (!v)
      throw ParseError("line " + std::to_string(lineno) + ": cannot parse '" + token + "'", lineno);
    values.push_back(*v);
  }
  return make_sample(values);
}

Sample read_sample(const std::filesystem::path& path, const std::optional<ColumnSelector>& column) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw ParseError("read failure on '" + path.string() + "'", 0);
  return read_sample_text(buf.str(), column);
}

// ---------------------------------------------------------------- power study

void PowerStudySpec::validate() const {
  if (pairs.empty() || sizes.empty()) throw std::invalid_argument("study needs pairs and sizes");
  if (replications < 1 || resamples < 1)
    throw std::invalid_argument("replications and resamples must be >= 1");
  for (const auto& [m, n] : sizes)
    if (m < 2 || n < 2) throw std::invalid_argument("sample sizes must be >= 2");
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 1/2)");
}

PowerStudySpec PowerStudySpec::from_json(const nlohmann::json& j) {
  PowerStudySpec spec;
  if (!j.contains("seed")) throw std::invalid_argument("study config requires an explicit seed");
  spec.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& p : j.at("pairs")) {
    if (p.is_array())
      spec.pairs.emplace_back(parse_distribution(p.at(0).get<std::string>()),
                              parse_distribution(p.at(1).get<std::string>()));
    else
      spec.pairs.emplace_back(parse_distribution(p.at("f").get<std::string>()),
                              parse_distribution(p.at("g").get<std::string>()));
  }
  for (const auto& s : j.at("sizes"))
    spec.sizes.emplace_back(s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>());
  spec.alpha = j.value("alpha", 0.05);
  spec.replications = j.value("replications", std::size_t{1000});
  spec.resamples = j.value("resamples", std::size_t{1000});
  spec.scheme = parse_scheme(j.value("scheme", std::string("switched")));
  spec.threads = j.value("threads", 0u);
  spec.validate();
  return spec;
}

double PowerCell::rate() const noexcept {
  return replications ? static_cast<double>(rejections) / static_cast<double>(replications) : 0.0;
}

double PowerCell::standard_error() const noexcept {
  const double p = rate();
  return replications ? std::sqrt(p * (1.0 - p) / static_cast<double>(replications)) : 0.0;
}

std::pair<std::size_t, std::size_t> power_cell(const DistributionSpec& f, const DistributionSpec& g,
                                               std::size_t m, std::size_t n,
                                               const PowerStudySpec& spec, std::size_t cell) {
  std::vector<char> ks(spec.replications), cvm(spec.replications);
  parallel_for(spec.replications, spec.threads, [&](std::size_t r) {
    bool a = false, b = false;
    replication_rejects(f, g, m, n, spec, cell, r, a, b);
    ks[r] = a;
    cvm[r] = b;
  });
  return {static_cast<std::size_t>(std::count(ks.begin(), ks.end(), 1)),
          static_cast<std::size_t>(std::count(cvm.begin(), cvm.end(), 1))};
}

PowerStudyResult power_study(const PowerStudySpec& spec) {
  spec.validate();
  struct CellDef {
    DistributionSpec f, g;
    std::size_t m, n;
  };
  std::vector<CellDef> defs;
  for (const auto& [f, g] : spec.pairs)
    for (const auto& [m, n] : spec.sizes) defs.push_back({f, g, m, n});

  const std::size_t reps = spec.replications;
  std::vector<char> ks(defs.size() * reps), cvm(defs.size() * reps);
  std::vector<double> seconds(defs.size() * reps);
  parallel_for(defs.size() * reps, spec.threads, [&](std::size_t task) {
    const std::size_t c = task / reps, r = task % reps;
    const auto start = std::chrono::steady_clock::now();
    bool a = false, b = false;
    replication_rejects(defs[c].f, defs[c].g, defs[c].m, defs[c].n, spec, c, r, a, b);
    ks[task] = a;
    cvm[task] = b;
    seconds[task] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });

  PowerStudyResult out;
  for (std::size_t c = 0; c < defs.size(); ++c) {
    const auto first = static_cast<std::ptrdiff_t>(c * reps);
    const auto last = first + static_cast<std::ptrdiff_t>(reps);
    double wall = 0.0;
    for (auto i = first; i < last; ++i) wall += seconds[static_cast<std::size_t>(i)];
    for (StatKind kind : {StatKind::KS, StatKind::CvM}) {
      const auto& flags = kind == StatKind::KS ? ks : cvm;
      PowerCell cell{defs[c].f, defs[c].g, defs[c].m, defs[c].n, kind, 0, reps, wall};
      cell.rejections =
          static_cast<std::size_t>(std::count(flags.begin() + first, flags.begin() + last, 1));
      out.cells.push_back(cell);
    }
  }
  return out;
}

// ---------------------------------------------------------------- table 1

std::vector<Table1Row> table1(double tau, std::span<const double> alphas) {
  const auto sw = two_point_params(tau, ResamplingScheme::Switched);
  const auto pr = two_point_params(tau, ResamplingScheme::Proportional);
  std::vector<Table1Row> rows;
  for (double a : alphas) {
    Table1Row row;
    row.alpha = a;
    row.c_switched = limit_quantile(sw, a);
    row.c_proportional = limit_quantile(pr, a);
    row.reject_switched = tks_exceed_prob(tau, row.c_switched);
    row.reject_proportional = tks_exceed_prob(tau, row.c_proportional);
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------- reports

nlohmann::json to_json(const TestReport& r, bool timing) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(r.kind));
  j["statistic"] = r.statistic;
  j["critical_value"] = r.critical_value;
  j["p_value"] = r.p_value;
  j["reject"] = r.reject;
  j["m"] = r.m;
  j["n"] = r.n;
  j["alpha"] = r.alpha;
  j["resamples"] = r.resamples;
  j["scheme"] = std::string(to_string(r.scheme));
  j["seed"] = r.seed;
  j["version"] = kVersion;
  if (timing) j["wall_time_seconds"] = r.wall_time_seconds;
  return j;
}

TestReport test_report_from_json(const nlohmann::json& j) {
  TestReport r;
  const auto kind = j.at("kind").get<std::string>();
  if (kind != "ks" && kind != "cvm") throw std::invalid_argument("unknown kind '" + kind + "'");
  r.kind = kind == "ks" ? StatKind::KS : StatKind::CvM;
  r.statistic = j.at("statistic").get<double>();
  r.critical_value = j.at("critical_value").get<double>();
  r.p_value = j.at("p_value").get<double>();
  r.reject = j.at("reject").get<bool>();
  r.m = j.at("m").get<std::size_t>();
  r.n = j.at("n").get<std::size_t>();
  r.alpha = j.at("alpha").get<double>();
  r.resamples = j.at("resamples").get<std::size_t>();
  r.scheme = parse_scheme(j.at("scheme").get<std::string>());
  r.seed = j.at("seed").get<std::uint64_t>();
  r.wall_time_seconds = j.value("wall_time_seconds", 0.0);
  return r;
}

std::string write_report(std::span<const TestReport> reports, ReportFormat format, bool timing) {
  if (format == ReportFormat::Json) {
    if (reports.size() == 1) return to_json(reports[0], timing).dump(2) + "\n";
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(to_json(r, timing));
    return arr.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "kind\tstatistic\tcritical_value\tp_value\treject\tm\tn\talpha\tresamples\tscheme\tseed";
  if (timing) out << "\twall_time_seconds";
  out << "\n";
  for (const auto& r : reports) {
    out << to_string(r.kind) << '\t' << fmt_double(r.statistic) << '\t'
        << fmt_double(r.critical_value) << '\t' << fmt_double(r.p_value) << '\t'
        << (r.reject ? "true" : "false") << '\t' << r.m << '\t' << r.n << '\t'
        << fmt_double(r.alpha) << '\t' << r.resamples << '\t' << to_string(r.scheme) << '\t'
        << r.seed;
    if (timing) out << '\t' << fmt_double(r.wall_time_seconds);
    out << "\n";
  }
  return out.str();
}

std::string write_report(const PowerStudyResult& result, ReportFormat format, bool timing) {
  if (format == ReportFormat::Json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : result.cells) {
      nlohmann::json j;
      j["f"] = c.f.to_string();
      j["g"] = c.g.to_string();
      j["m"] = c.m;
      j["n"] = c.n;
      j["statistic"] = std::string(to_string(c.kind));
      j["rejections"] = c.rejections;
      j["replications"] = c.replications;
      j["rate"] = c.rate();
      j["standard_error"] = c.standard_error();
      if (timing) j["wall_time_seconds"] = c.wall_time_seconds;
      arr.push_back(j);
    }
    return nlohmann::json{{"version", kVersion}, {"cells", arr}}.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "f\tg\tm\tn\tstatistic\trejections\treplications\trate\tstandard_error";
  if (timing) out << "\twall_time_seconds";
  out << "\n";
  for (const auto& c : result.cells) {
    out << c.f.to_string() << '\t' << c.g.to_string() << '\t' << c.m << '\t' << c.n << '\t'
        << to_string(c.kind) << '\t' << c.rejections << '\t' << c.replications << '\t'
        << fmt_double(c.rate()) << '\t' << fmt_double(c.standard_error());
    if (timing) out << '\t' << fmt_double(c.wall_time_seconds);
    out << "\n";
  }
  return out.str();
}

std::string write_report(std::span<const Table1Row> rows, ReportFormat format) {
  if (format == ReportFormat::Json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
      arr.push_back({{"alpha", r.alpha},
                     {"c_switched", r.c_switched},
                     {"c_proportional", r.c_proportional},
                     {"reject_switched", r.reject_switched},
                     {"reject_proportional", r.reject_proportional}});
    return nlohmann::json{{"version", kVersion}, {"rows", arr}}.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "alpha\tc_switched\tc_proportional\treject_switched\treject_proportional\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.3f\t%.4f\t%.4f\t%.4f\t%.4f\n", r.alpha, r.c_switched,
                  r.c_proportional, r.reject_switched, r.reject_proportional);
    out << buf;
  }
  return out.str();
}

nlohmann::json to_json(const Classification& c, const DistributionSpec& f,
                       const DistributionSpec& g, double tau) {
  auto intervals = [](const IntervalSet& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& iv : s.intervals())
      arr.push_back({iv.lo, std::isinf(iv.hi) ? nlohmann::json("inf") : nlohmann::json(iv.hi)});
    return arr;
  };
  nlohmann::json j;
  j["f"] = f.to_string();
  j["g"] = g.to_string();
  j["tau"] = tau;
  j["class"] = std::string(to_string(c.kind));
  j["icx_holds"] = c.icx.holds;
  j["max_violation"] = c.icx.max_violation;
  j["argmax"] = c.icx.argmax;
  if (c.equality) {
    j["equality_set"] = intervals(c.equality->a);
    j["s"] = intervals(c.equality->s);
    j["s_length"] = c.equality->s.total_length();
    j["gamma_h"] = std::isinf(c.equality->gamma_h) ? nlohmann::json("inf")
                                                   : nlohmann::json(c.equality->gamma_h);
    j["t_max"] = c.equality->t_max;
  }
  j["version"] = kVersion;
  return j;
}

// ---------------------------------------------------------------- CLI

int cli_main(int argc, const char* const* argv) { return cli_main(argc, argv, std::cout, std::cerr); }

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bootstrap tests for increasing convex (stop-loss) order", "icxorder"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string out_path;
  std::string format_text;
  bool no_timing = false;
  unsigned threads = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Write output to this file instead of stdout");
    sub->add_option("--format", format_text, "Output format")
        ->check(CLI::IsMember({"json", "tsv"}));
  };

  // test
  std::string x_path, y_path, column_text, stat_text = "both", scheme_text = "switched";
  double alpha = 0.05;
  std::size_t resamples = 1000;
  std::uint64_t seed = 0;
  auto* test = app.add_subcommand("test", "Run the two-sample bootstrap test(s) on two data files");
  test->add_option("--x", x_path, "First sample (hypothesised icx-smaller)")->required();
  test->add_option("--y", y_path, "Second sample")->required();
  test->add_option("--column", column_text, "Column (1-based index or header name)");
  test->add_option("--stat", stat_text, "Statistic")->check(CLI::IsMember({"ks", "cvm", "both"}));
  test->add_option("--alpha", alpha, "Significance level in (0, 1/2)");
  test->add_option("--resamples", resamples, "Bootstrap replicates B");
  test->add_option("--scheme", scheme_text, "Resampling scheme")
      ->check(CLI::IsMember({"switched", "proportional"}));
  test->add_option("--seed", seed, "Random seed");
  test->add_option("--threads", threads, "Worker threads (0 = all cores)");
  test->add_flag("--no-timing", no_timing, "Omit wall-time fields");
  common(test);

  // power
  std::string config_path;
  std::optional<std::uint64_t> study_seed;
  auto* power = app.add_subcommand("power", "Monte-Carlo power study from a JSON config");
  power->add_option("--config", config_path, "Study configuration (JSON)")->required();
  power->add_option("--seed", study_seed, "Seed (overrides the config)");
  power->add_option("--threads", threads, "Worker threads (0 = all cores)");
  power->add_flag("--no-timing", no_timing, "Omit wall-time fields");
  common(power);

  // table1
  double tau = 0.75;
  std::vector<double> alphas{0.1, 0.05, 0.025};
  auto* t1 = app.add_subcommand("table1", "Limiting KS critical values in the two-point example");
  t1->add_option("--tau", tau, "Limit of m / (m + n)");
  t1->add_option("--alphas", alphas, "Comma-separated significance levels")->delimiter(',');
  common(t1);

  // classify
  std::string f_text, g_text;
  double class_tau = 0.5;
  auto* classify = app.add_subcommand("classify", "Where a pair of laws sits relative to the hypothesis");
  classify->add_option("--f", f_text, "First law, e.g. weib(2)")->required();
  classify->add_option("--g", g_text, "Second law, e.g. exp(1)")->required();
  classify->add_option("--tau", class_tau, "Mixing ratio m / (m + n)");
  common(classify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  auto emit = [&](const std::string& text) {
    if (out_path.empty()) {
      out << text;
      return;
    }
    std::ofstream file(out_path);
    if (!file) throw ParseError("cannot write '" + out_path + "'", 0);
    file << text;
  };
  auto format_or = [&](ReportFormat fallback) {
    if (format_text.empty()) return fallback;
    return format_text == "json" ? ReportFormat::Json : ReportFormat::Tsv;
  };

  // Stage 1: interpret flags. Anything thrown here is a usage error.
  BootstrapConfig cfg;
  StatSelection which = StatSelection::Both;
  std::optional<ColumnSelector> column;
  std::optional<PowerStudySpec> study;
  std::optional<std::pair<DistributionSpec, DistributionSpec>> pair;
  try {
    if (*test) {
      cfg.replicates = resamples;
      cfg.alpha = alpha;
      cfg.scheme = parse_scheme(scheme_text);
      cfg.seed = seed;
      cfg.threads = threads;
      cfg.validate();
      which = parse_stat_selection(stat_text);
      if (!column_text.empty()) column = ColumnSelector::parse(column_text);
    } else if (*t1) {
      if (!(tau > 0.0 && tau <= 1.0)) throw UsageError("--tau must lie in (0, 1]");
      for (double a : alphas)
        if (!(a > 0.0 && a < 0.5)) throw UsageError("--alphas entries must lie in (0, 1/2)");
    } else if (*classify) {
      if (!(class_tau >= 0.0 && class_tau <= 1.0)) throw UsageError("--tau must lie in [0, 1]");
      pair.emplace(parse_distribution(f_text), parse_distribution(g_text));
    }
  } catch (const std::exception& e) {
    err << "icxorder: " << e.what() << "\n";
    return 1;
  }

  // Stage 2: read data and compute. Failures here are data errors.
  try {
    if (*test) {
      const Sample x = read_sample(x_path, column);
      const Sample y = read_sample(y_path, column);
      const auto reports = run_test(x, y, which, cfg);
      emit(write_report(reports, format_or(ReportFormat::Json), !no_timing));
    } else if (*power) {
      std::ifstream in(config_path);
      if (!in) throw ParseError("cannot open '" + config_path + "'", 0);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
        if (study_seed) j["seed"] = *study_seed;
        study = PowerStudySpec::from_json(j);
      } catch (const std::exception& e) {
        err << "icxorder: invalid study config: " << e.what() << "\n";
        return 2;
      }
      if (threads) study->threads = threads;
      emit(write_report(power_study(*study), format_or(ReportFormat::Tsv), !no_timing));
    } else if (*t1) {
      const auto rows = table1(tau, alphas);
      emit(write_report(rows, format_or(ReportFormat::Tsv)));
    } else if (*classify) {
      const auto c = classify_pair(pair->first, pair->second, class_tau);
      emit(to_json(c, pair->first, pair->second, class_tau).dump(2) + "\n");
    }
  } catch (const std::exception& e) {
    err << "icxorder: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace icx
