#include "looptf/task.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "looptf/errors.hpp"

namespace looptf {

namespace {

// Exact 17-significant-digit decimal: enough to round-trip any double.
std::string render_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void append_vector(std::string& out, const RealVector& v) {
  out += '[';
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i > 0) out += ", ";
    out += render_double(v[i]);
  }
  out += ']';
}

}  // namespace

RealMatrix PromptState::x() const {
  RealMatrix out(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out(i, j) = z(i, j);
  return out;
}

RealVector PromptState::y() const {
  RealVector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = z(i, d);
  return out;
}

RealVector PromptState::q() const {
  RealVector out(d);
  for (std::size_t j = 0; j < d; ++j) out[j] = z(n, j);
  return out;
}

double PromptState::alpha() const { return z(n, d); }

RealMatrix sample_gaussian_matrix(std::size_t n, std::size_t d,
                                  RandomSource& rng) {
  if (n == 0 || d == 0) {
    throw DimensionError("sample_gaussian_matrix: dimensions must be >= 1");
  }
  RealMatrix out(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out(i, j) = rng.next_gaussian();
  return out;
}

RealVector sample_unit_sphere(std::size_t d, RandomSource& rng) {
  if (d == 0) {
    throw DimensionError("sample_unit_sphere: dimension must be >= 1");
  }
  for (;;) {
    RealVector v(d);
    for (std::size_t i = 0; i < d; ++i) v[i] = rng.next_gaussian();
    const double norm = l2_norm(v);
    if (norm == 0.0) continue;  // probability zero, but never divide by it
    for (std::size_t i = 0; i < d; ++i) v[i] /= norm;
    return v;
  }
}

TaskInstance make_task(std::size_t n, std::size_t d, double alpha,
                       RandomSource& rng) {
  if (alpha == 0.0) {
    throw InvalidQueryError("make_task: query scalar alpha must be nonzero");
  }
  if (n <= d || d == 0) {
    throw UnderdeterminedError("make_task: needs n > d >= 1, got n=" +
                               std::to_string(n) + " d=" + std::to_string(d));
  }
  TaskInstance task;
  task.seed = rng.seed();
  task.alpha = alpha;
  task.x = sample_gaussian_matrix(n, d, rng);
  task.theta_star = sample_unit_sphere(d, rng);
  task.y = matvec(task.x, task.theta_star);
  task.q0 = RealVector(d);
  return task;
}

PromptState assemble_prompt(const TaskInstance& task) {
  return make_prompt(task.x, task.y, task.q0, task.alpha);
}

PromptState make_prompt(const RealMatrix& x, const RealVector& y,
                        const RealVector& q, double alpha) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (y.dim() != n) {
    throw DimensionError("make_prompt: y dim " + std::to_string(y.dim()) +
                         " != n " + std::to_string(n));
  }
  if (q.dim() != d) {
    throw DimensionError("make_prompt: q dim " + std::to_string(q.dim()) +
                         " != d " + std::to_string(d));
  }
  PromptState prompt;
  prompt.n = n;
  prompt.d = d;
  prompt.z = RealMatrix(n + 1, d + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) prompt.z(i, j) = x(i, j);
    prompt.z(i, d) = y[i];
  }
  for (std::size_t j = 0; j < d; ++j) prompt.z(n, j) = q[j];
  prompt.z(n, d) = alpha;
  return prompt;
}

std::string task_to_json(const TaskInstance& task) {
  // Hand-emitted so the byte layout is deterministic across library versions.
  std::string out;
  out += "{\n";
  out += "  \"format\": \"looptf-task\",\n";
  out += "  \"version\": " + std::to_string(kTaskFormatVersion) + ",\n";
  out += "  \"n\": " + std::to_string(task.n()) + ",\n";
  out += "  \"d\": " + std::to_string(task.d()) + ",\n";
  out += "  \"alpha\": " + render_double(task.alpha) + ",\n";
  out += "  \"seed\": " + std::to_string(task.seed) + ",\n";
  out += "  \"X\": [";
  for (std::size_t i = 0; i < task.n(); ++i) {
    if (i > 0) out += ", ";
    RealVector row(task.d());
    for (std::size_t j = 0; j < task.d(); ++j) row[j] = task.x(i, j);
    append_vector(out, row);
  }
  out += "],\n";
  out += "  \"y\": ";
  append_vector(out, task.y);
  out += ",\n  \"theta_star\": ";
  append_vector(out, task.theta_star);
  out += ",\n  \"q0\": ";
  append_vector(out, task.q0);
  out += "\n}\n";
  return out;
}

TaskInstance task_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("task_from_json: not valid JSON: ") +
                     e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "looptf-task") {
      throw ParseError("task_from_json: unrecognized format field");
    }
    if (doc.at("version").get<int>() != kTaskFormatVersion) {
      throw ParseError("task_from_json: unsupported version " +
                       doc.at("version").dump());
    }
    const auto n = doc.at("n").get<std::size_t>();
    const auto d = doc.at("d").get<std::size_t>();
    TaskInstance task;
    task.alpha = doc.at("alpha").get<double>();
    task.seed = doc.at("seed").get<std::uint64_t>();
    const auto& rows = doc.at("X");
    if (rows.size() != n) {
      throw ParseError("task_from_json: X row count mismatch");
    }
    task.x = RealMatrix(n, d);
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != d) {
        throw ParseError("task_from_json: X column count mismatch");
      }
      for (std::size_t j = 0; j < d; ++j) {
        task.x(i, j) = rows[i][j].get<double>();
      }
    }
    task.y = RealVector(doc.at("y").get<std::vector<double>>());
    task.theta_star =
        RealVector(doc.at("theta_star").get<std::vector<double>>());
    task.q0 = RealVector(doc.at("q0").get<std::vector<double>>());
    if (task.y.dim() != n || task.theta_star.dim() != d ||
        task.q0.dim() != d) {
      throw ParseError("task_from_json: vector length mismatch");
    }
    if (task.alpha == 0.0) {
      throw ParseError("task_from_json: alpha must be nonzero");
    }
    return task;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("task_from_json: missing or mistyped field: ") +
                     e.what());
  }
}

void save_task(const TaskInstance& task, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("save_task: cannot open " + path + " for writing");
  const std::string text = task_to_json(task);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("save_task: write failed for " + path);
}

TaskInstance load_task(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load_task: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return task_from_json(buf.str());
}

}  // namespace looptf
