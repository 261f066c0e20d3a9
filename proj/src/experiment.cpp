#include "looptf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <thread>

#include "looptf/errors.hpp"
#include "looptf/gd_oracle.hpp"
#include "looptf/verify.hpp"

namespace looptf {

namespace {

constexpr const char* kCsvHeader = "n,d,trial,seed,kappa,t,emp_err,bound,norm_log_err";

// Shortest decimal that round-trips the exact double.
std::string render_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& field, std::size_t line_no) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ParseError("csv line " + std::to_string(line_no) +
                     ": bad float field '" + field + "'");
  }
  return value;
}

std::uint64_t parse_u64(const std::string& field, std::size_t line_no) {
  std::uint64_t value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ParseError("csv line " + std::to_string(line_no) +
                     ": bad integer field '" + field + "'");
  }
  return value;
}

std::size_t worker_count(std::size_t items) {
  std::size_t count = 0;
  if (const char* env = std::getenv("LOOPTF_WORKERS")) {
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && parsed >= 1) count = parsed;
  }
  if (count == 0) {
    count = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  }
  return std::min(count, std::max<std::size_t>(items, 1));
}

}  // namespace

void ExperimentConfig::validate() const {
  if (d == 0) throw ValueError("ExperimentConfig: d must be >= 1");
  if (n_values.empty()) {
    throw ValueError("ExperimentConfig: n_values must be nonempty");
  }
  for (std::size_t n : n_values) {
    if (n <= d) {
      throw ValueError("ExperimentConfig: every n must exceed d, got n=" +
                       std::to_string(n) + " d=" + std::to_string(d));
    }
  }
  if (trials == 0) throw ValueError("ExperimentConfig: trials must be >= 1");
  if (loops == 0) throw ValueError("ExperimentConfig: loops must be >= 1");
  if (alpha == 0.0) throw ValueError("ExperimentConfig: alpha must be nonzero");
}

std::vector<ConvergenceRecord> records_for_task(const TaskInstance& task,
                                                const LoopConfig& config,
                                                std::size_t trial_index) {
  config.validate();
  const RegressionProblem problem =
      RegressionProblem::from_data(task.x, task.y);
  const LoopTrajectory traj = run_loops(task, config);

  const double eta_star = 1.0 / problem.l;
  const bool hypotheses_hold =
      linf_norm(task.q0) == 0.0 && config.schedule.is_constant() &&
      std::fabs(config.schedule.constant_value() - eta_star) <=
          1e-12 * eta_star;

  BoundParams bounds;
  bounds.kappa = problem.kappa;
  bounds.alpha = task.alpha;
  if (linf_norm(task.q0) == 0.0) {
    bounds.r = 1.0;  // theta0 = 0 and ||theta*|| = 1
  } else {
    bounds.r =
        l2_norm((-1.0 / task.alpha) * task.q0 - task.theta_star);
  }

  // Parameter trajectory recovered from the query row: theta^(t) = -q^(t)/alpha.
  std::vector<double> param_sq;
  param_sq.reserve(traj.q_states.size());
  for (const RealVector& q : traj.q_states) {
    const RealVector theta = (-1.0 / task.alpha) * q;
    const double dist = l2_norm(theta - task.theta_star);
    param_sq.push_back(dist * dist);
  }
  const double initial_sq = param_sq.front();

  std::vector<ConvergenceRecord> records;
  records.reserve(traj.q_states.size());
  for (std::size_t t = 0; t < traj.q_states.size(); ++t) {
    ConvergenceRecord rec;
    rec.n = task.n();
    rec.d = task.d();
    rec.trial = trial_index;
    rec.seed = task.seed;
    rec.kappa = problem.kappa;
    rec.t = t;
    rec.emp_err = traj.per_step_errors[t];
    rec.bound = theoretical_prediction_bound(t, bounds);
    const double ratio = (initial_sq > 0.0) ? param_sq[t] / initial_sq : 1.0;
    rec.norm_log_err = std::log(std::max(ratio, kNormLogFloor));
    if (hypotheses_hold && rec.emp_err > rec.bound + kBoundSlack) {
      throw VerificationError(
          "record (n=" + std::to_string(rec.n) + ", trial=" +
          std::to_string(rec.trial) + ", t=" + std::to_string(t) +
          ") violates the error ceiling: emp=" + render_shortest(rec.emp_err) +
          " bound=" + render_shortest(rec.bound));
    }
    records.push_back(rec);
  }
  return records;
}

std::vector<ConvergenceRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();

  struct WorkItem {
    std::size_t n_index = 0;
    std::size_t trial = 0;
  };
  std::vector<WorkItem> items;
  items.reserve(config.n_values.size() * config.trials);
  for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
      items.push_back({ni, trial});
    }
  }

  std::vector<std::vector<ConvergenceRecord>> slots(items.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string failure_message;
  std::mutex failure_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= items.size() || failed.load()) break;
      const WorkItem item = items[idx];
      try {
        const std::size_t n = config.n_values[item.n_index];
        RandomSource rng(config.base_seed + item.trial);
        const TaskInstance task =
            make_task(n, config.d, config.alpha, rng);
        const RegressionProblem problem =
            RegressionProblem::from_data(task.x, task.y);
        LoopConfig loop;
        loop.loops = config.loops;
        loop.schedule = StepSchedule::constant(1.0 / problem.l);
        slots[idx] = records_for_task(task, loop, item.trial);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failed.exchange(true)) failure_message = e.what();
      }
    }
  };

  const std::size_t workers = worker_count(items.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (failed.load()) throw VerificationError(failure_message);

  // Canonical (n, trial, t) order: slots are already laid out that way.
  std::vector<ConvergenceRecord> records;
  records.reserve(items.size() * (config.loops + 1));
  for (const auto& slot : slots) {
    records.insert(records.end(), slot.begin(), slot.end());
  }
  return records;
}

std::string records_to_csv(const std::vector<ConvergenceRecord>& records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const ConvergenceRecord& rec : records) {
    out += std::to_string(rec.n);
    out += ',';
    out += std::to_string(rec.d);
    out += ',';
    out += std::to_string(rec.trial);
    out += ',';
    out += std::to_string(rec.seed);
    out += ',';
    out += render_shortest(rec.kappa);
    out += ',';
    out += std::to_string(rec.t);
    out += ',';
    out += render_shortest(rec.emp_err);
    out += ',';
    out += render_shortest(rec.bound);
    out += ',';
    out += render_shortest(rec.norm_log_err);
    out += '\n';
  }
  return out;
}

void write_records_csv(const std::vector<ConvergenceRecord>& records,
                       const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("write_records_csv: cannot open " + path + " for writing");
  }
  const std::string text = records_to_csv(records);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write_records_csv: write failed for " + path);
}

std::vector<ConvergenceRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_records_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ParseError("read_records_csv: missing or wrong header in " + path);
  }
  std::vector<ConvergenceRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 9) {
      throw ParseError("csv line " + std::to_string(line_no) + ": expected 9 fields, got " +
                       std::to_string(fields.size()));
    }
    ConvergenceRecord rec;
    rec.n = static_cast<std::size_t>(parse_u64(fields[0], line_no));
    rec.d = static_cast<std::size_t>(parse_u64(fields[1], line_no));
    rec.trial = static_cast<std::size_t>(parse_u64(fields[2], line_no));
    rec.seed = parse_u64(fields[3], line_no);
    rec.kappa = parse_double(fields[4], line_no);
    rec.t = static_cast<std::size_t>(parse_u64(fields[5], line_no));
    rec.emp_err = parse_double(fields[6], line_no);
    rec.bound = parse_double(fields[7], line_no);
    rec.norm_log_err = parse_double(fields[8], line_no);
    records.push_back(rec);
  }
  return records;
}

std::vector<PlotSeries> plot_series(
    const std::vector<ConvergenceRecord>& records) {
  // Group by n in encounter order; within each n accumulate per-t means.
  std::vector<std::size_t> n_order;
  std::map<std::size_t, std::map<std::size_t, std::pair<double, double>>> sums;
  std::map<std::size_t, std::map<std::size_t, std::size_t>> counts;
  for (const ConvergenceRecord& rec : records) {
    if (sums.find(rec.n) == sums.end()) n_order.push_back(rec.n);
    auto& cell = sums[rec.n][rec.t];
    cell.first += rec.norm_log_err;
    cell.second += -static_cast<double>(rec.t) / rec.kappa;
    counts[rec.n][rec.t] += 1;
  }
  std::vector<PlotSeries> series;
  series.reserve(n_order.size());
  for (std::size_t n : n_order) {
    PlotSeries s;
    s.n = n;
    for (const auto& [t, cell] : sums[n]) {
      const double count = static_cast<double>(counts[n][t]);
      s.t.push_back(t);
      s.mean_norm_log_err.push_back(cell.first / count);
      s.bound_log.push_back(cell.second / count);
    }
    series.push_back(std::move(s));
  }
  return series;
}

std::string plot_series_to_csv(const std::vector<PlotSeries>& series) {
  std::string out = "n,t,mean_norm_log_err,bound_log\n";
  for (const PlotSeries& s : series) {
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      out += std::to_string(s.n);
      out += ',';
      out += std::to_string(s.t[i]);
      out += ',';
      out += render_shortest(s.mean_norm_log_err[i]);
      out += ',';
      out += render_shortest(s.bound_log[i]);
      out += '\n';
    }
  }
  return out;
}

std::vector<NSummary> summarize(const std::vector<ConvergenceRecord>& records) {
  const std::vector<PlotSeries> series = plot_series(records);

  // Per-n, per-trial kappa and final error (kappa repeats on every record of
  // a trial, so keep one).
  std::map<std::size_t, std::map<std::size_t, double>> kappas;
  std::map<std::size_t, std::map<std::size_t, std::pair<std::size_t, double>>>
      finals;  // trial -> (max t seen, emp_err there)
  for (const ConvergenceRecord& rec : records) {
    kappas[rec.n][rec.trial] = rec.kappa;
    auto& fin = finals[rec.n][rec.trial];
    if (rec.t >= fin.first) fin = {rec.t, rec.emp_err};
  }

  std::vector<NSummary> out;
  out.reserve(series.size());
  for (const PlotSeries& s : series) {
    NSummary summary;
    summary.n = s.n;
    double kappa_sum = 0.0;
    for (const auto& [trial, kappa] : kappas[s.n]) kappa_sum += kappa;
    summary.mean_kappa = kappa_sum / static_cast<double>(kappas[s.n].size());
    double final_sum = 0.0;
    for (const auto& [trial, fin] : finals[s.n]) final_sum += fin.second;
    summary.mean_final_err =
        final_sum / static_cast<double>(finals[s.n].size());

    std::vector<double> ts;
    std::vector<double> vals;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      if (s.t[i] >= kSlopeFitFirst && s.t[i] <= kSlopeFitLast) {
        ts.push_back(static_cast<double>(s.t[i]));
        vals.push_back(s.mean_norm_log_err[i]);
      }
    }
    // Short runs have no fit window; signal that with NaN rather than throw.
    summary.slope = ts.size() >= 2
                        ? fit_slope(ts, vals)
                        : std::numeric_limits<double>::quiet_NaN();
    out.push_back(summary);
  }
  return out;
}

double fit_slope(const std::vector<double>& ts,
                 const std::vector<double>& vals) {
  if (ts.size() != vals.size() || ts.size() < 2) {
    throw ValueError("fit_slope: need at least two matched points");
  }
  const double count = static_cast<double>(ts.size());
  double mean_t = 0.0;
  double mean_v = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    mean_t += ts[i];
    mean_v += vals[i];
  }
  mean_t /= count;
  mean_v /= count;
  double cov = 0.0;
  double var = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    cov += (ts[i] - mean_t) * (vals[i] - mean_v);
    var += (ts[i] - mean_t) * (ts[i] - mean_t);
  }
  if (var == 0.0) throw ValueError("fit_slope: degenerate abscissa");
  return cov / var;
}

}  // namespace looptf
