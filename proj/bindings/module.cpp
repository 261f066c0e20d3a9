// Python bindings: numpy arrays in and out, plain structs for reports.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <utility>
#include <vector>

#include "looptf/errors.hpp"
#include "looptf/experiment.hpp"
#include "looptf/gd_oracle.hpp"
#include "looptf/looped_tf.hpp"
#include "looptf/spectral.hpp"
#include "looptf/task.hpp"
#include "looptf/verify.hpp"

namespace py = pybind11;
using namespace looptf;

namespace {

using DoubleArray =
    py::array_t<double, py::array::c_style | py::array::forcecast>;

RealVector as_vector(const DoubleArray& arr) {
  if (arr.ndim() != 1) throw py::value_error("expected a 1-d float array");
  const double* data = arr.data();
  return RealVector(std::vector<double>(data, data + arr.shape(0)));
}

RealMatrix as_matrix(const DoubleArray& arr) {
  if (arr.ndim() != 2) throw py::value_error("expected a 2-d float array");
  const auto rows = static_cast<std::size_t>(arr.shape(0));
  const auto cols = static_cast<std::size_t>(arr.shape(1));
  const double* data = arr.data();
  return RealMatrix(rows, cols,
                    std::vector<double>(data, data + rows * cols));
}

// The ssize_t "count" constructor of array_t leaves the strides empty (a
// stride-0 view over one element in pybind11 3.0), so 1-d arrays are built
// through an explicit shape container instead.
py::array_t<double> from_vector(const RealVector& v) {
  py::array_t<double> out(
      py::array::ShapeContainer{static_cast<py::ssize_t>(v.dim())});
  std::copy(v.entries().begin(), v.entries().end(), out.mutable_data());
  return out;
}

py::array_t<double> from_matrix(const RealMatrix& m) {
  py::array_t<double> out({static_cast<py::ssize_t>(m.rows()),
                           static_cast<py::ssize_t>(m.cols())});
  std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
  return out;
}

// States stacked into a (T+1) x d array.
py::array_t<double> from_states(const std::vector<RealVector>& states) {
  const py::ssize_t rows = static_cast<py::ssize_t>(states.size());
  const py::ssize_t cols =
      states.empty() ? 0 : static_cast<py::ssize_t>(states.front().dim());
  py::array_t<double> out({rows, cols});
  double* data = out.mutable_data();
  for (const RealVector& state : states) {
    data = std::copy(state.entries().begin(), state.entries().end(), data);
  }
  return out;
}

py::array_t<double> from_doubles(const std::vector<double>& values) {
  py::array_t<double> out(
      py::array::ShapeContainer{static_cast<py::ssize_t>(values.size())});
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

// eta: None = 1/L for the given data, a number = constant schedule, a
// sequence = one eta per loop.
StepSchedule schedule_from(const py::object& eta, const RealMatrix& x,
                           const RealVector& y) {
  if (eta.is_none()) {
    const RegressionProblem problem = RegressionProblem::from_data(x, y);
    return StepSchedule::constant(1.0 / problem.l);
  }
  if (py::isinstance<py::float_>(eta) || py::isinstance<py::int_>(eta)) {
    return StepSchedule::constant(eta.cast<double>());
  }
  return StepSchedule::explicit_steps(eta.cast<std::vector<double>>());
}

LoopConfig config_from(std::size_t loops, const py::object& eta,
                       const RealMatrix& x, const RealVector& y) {
  LoopConfig config;
  config.loops = loops;
  config.schedule = schedule_from(eta, x, y);
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Linear looped-transformer simulator: attention loops, the "
      "gradient-descent oracle they track, and the verification suite.";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const IoError& e) {
      PyErr_SetString(PyExc_OSError, e.what());
    } catch (const ParseError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const VerificationError& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    } catch (const SingularityError& e) {
      PyErr_SetString(PyExc_ArithmeticError, e.what());
    } catch (const ConvergenceError& e) {
      PyErr_SetString(PyExc_ArithmeticError, e.what());
    } catch (const Error& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  py::class_<TaskInstance>(m, "TaskInstance")
      .def_property_readonly("n", &TaskInstance::n)
      .def_property_readonly("d", &TaskInstance::d)
      .def_property_readonly(
          "x", [](const TaskInstance& t) { return from_matrix(t.x); })
      .def_property_readonly(
          "y", [](const TaskInstance& t) { return from_vector(t.y); })
      .def_property_readonly(
          "theta_star",
          [](const TaskInstance& t) { return from_vector(t.theta_star); })
      .def_property_readonly(
          "q0", [](const TaskInstance& t) { return from_vector(t.q0); })
      .def_readonly("alpha", &TaskInstance::alpha)
      .def_readonly("seed", &TaskInstance::seed)
      .def("__repr__", [](const TaskInstance& t) {
        return "TaskInstance(n=" + std::to_string(t.n()) +
               ", d=" + std::to_string(t.d()) +
               ", seed=" + std::to_string(t.seed) + ")";
      });

  py::class_<LoopTrajectory>(m, "LoopTrajectory")
      .def_property_readonly(
          "q_states",
          [](const LoopTrajectory& t) { return from_states(t.q_states); })
      .def_property_readonly(
          "tf_output",
          [](const LoopTrajectory& t) { return from_vector(t.tf_output); })
      .def_property_readonly("per_step_errors", [](const LoopTrajectory& t) {
        return from_doubles(t.per_step_errors);
      });

  py::class_<GdTrajectory>(m, "GdTrajectory")
      .def_property_readonly(
          "theta_states",
          [](const GdTrajectory& t) { return from_states(t.theta_states); })
      .def_property_readonly(
          "param_errors",
          [](const GdTrajectory& t) { return from_doubles(t.param_errors); })
      .def_property_readonly("losses", [](const GdTrajectory& t) {
        return from_doubles(t.losses);
      });

  py::class_<SpectralSummary>(m, "SpectralSummary")
      .def_readonly("lambda_min", &SpectralSummary::lambda_min)
      .def_readonly("lambda_max", &SpectralSummary::lambda_max)
      .def_readonly("condition_number", &SpectralSummary::condition_number);

  py::class_<EquivalenceReport>(m, "EquivalenceReport")
      .def_readonly("seed", &EquivalenceReport::instance_seed)
      .def_readonly("max_state_gap", &EquivalenceReport::max_state_gap)
      .def_readonly("output_gap", &EquivalenceReport::output_gap)
      .def_readonly("tolerance", &EquivalenceReport::tolerance)
      .def_readonly("passed", &EquivalenceReport::passed);

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("seed", &BoundReport::instance_seed)
      .def_property_readonly(
          "per_step_margin",
          [](const BoundReport& r) { return from_doubles(r.per_step_margin); })
      .def_readonly("min_margin", &BoundReport::min_margin)
      .def_readonly("passed", &BoundReport::passed);

  m.def(
      "make_task",
      [](std::size_t n, std::size_t d, double alpha, std::uint64_t seed) {
        RandomSource rng(seed);
        return make_task(n, d, alpha, rng);
      },
      py::arg("n"), py::arg("d"), py::arg("alpha") = 1.0, py::arg("seed") = 0,
      "Sample a task: Gaussian X, unit-sphere theta*, labels y = X theta*.");
  m.def("save_task", &save_task, py::arg("task"), py::arg("path"));
  m.def("load_task", &load_task, py::arg("path"));
  m.def("task_to_json", &task_to_json, py::arg("task"));
  m.def("task_from_json", &task_from_json, py::arg("text"));

  m.def(
      "spectral_norm",
      [](const DoubleArray& a) { return spectral_norm(as_matrix(a)); },
      py::arg("a"));
  m.def(
      "condition_number",
      [](const DoubleArray& x) { return condition_number(as_matrix(x)); },
      py::arg("x"), "Extreme eigenvalues and condition number of X^T X.");
  m.def(
      "sym_eig_extremes",
      [](const DoubleArray& a) { return sym_eig_extremes(as_matrix(a)); },
      py::arg("a"), "(lambda_min, lambda_max) of a symmetric matrix.");
  m.def(
      "least_squares",
      [](const DoubleArray& x, const DoubleArray& y) {
        return from_vector(least_squares(as_matrix(x), as_vector(y)));
      },
      py::arg("x"), py::arg("y"));

  m.def(
      "attention_closed_form",
      [](const DoubleArray& x, const DoubleArray& y, const DoubleArray& q,
         double alpha) {
        return from_vector(
            attn_closed_form(as_matrix(x), as_vector(y), as_vector(q), alpha));
      },
      py::arg("x"), py::arg("y"), py::arg("q"), py::arg("alpha"),
      "Bottom attention row (X^T X) q + alpha X^T y.");
  m.def(
      "attention_general",
      [](const DoubleArray& x, const DoubleArray& y, const DoubleArray& q,
         double alpha) {
        const RealMatrix xm = as_matrix(x);
        const PromptState prompt =
            make_prompt(xm, as_vector(y), as_vector(q), alpha);
        return from_matrix(
            attn_general(prompt, default_params(xm.rows(), xm.cols())));
      },
      py::arg("x"), py::arg("y"), py::arg("q"), py::arg("alpha"),
      "Full masked attention (M o (Z Q Z^T)) Z P on the assembled prompt.");

  m.def(
      "run_loops",
      [](const TaskInstance& task, std::size_t loops, const py::object& eta) {
        return run_loops(task, config_from(loops, eta, task.x, task.y));
      },
      py::arg("task"), py::arg("loops"), py::arg("eta") = py::none(),
      "Iterate Z <- Z - eta * Attn(Z); eta = None uses 1/L.");
  m.def(
      "run_gd",
      [](const DoubleArray& x, const DoubleArray& y, const DoubleArray& theta0,
         std::size_t loops, const py::object& eta,
         const py::object& theta_star) {
        const RealMatrix xm = as_matrix(x);
        const RealVector yv = as_vector(y);
        std::optional<RealVector> target;
        if (!theta_star.is_none()) {
          target = as_vector(theta_star.cast<DoubleArray>());
        }
        return run_gd(RegressionProblem::from_data(xm, yv), as_vector(theta0),
                      config_from(loops, eta, xm, yv), target);
      },
      py::arg("x"), py::arg("y"), py::arg("theta0"), py::arg("loops"),
      py::arg("eta") = py::none(), py::arg("theta_star") = py::none(),
      "Gradient descent on 0.5 ||y - X theta||^2; eta = None uses 1/L.");
  m.def(
      "prediction_error",
      [](const DoubleArray& output, const DoubleArray& theta_star,
         double alpha) {
        return prediction_error(as_vector(output), as_vector(theta_star),
                                alpha);
      },
      py::arg("output"), py::arg("theta_star"), py::arg("alpha"));

  m.def(
      "theoretical_param_bound",
      [](std::size_t t, double kappa, double r) {
        BoundParams bounds;
        bounds.kappa = kappa;
        bounds.r = r;
        bounds.validate();
        return theoretical_param_bound(t, bounds);
      },
      py::arg("t"), py::arg("kappa"), py::arg("r") = 1.0,
      "e^{-t/kappa} R^2, the squared-parameter-distance ceiling.");
  m.def(
      "theoretical_prediction_bound",
      [](std::size_t t, double kappa, double r, double alpha) {
        BoundParams bounds;
        bounds.kappa = kappa;
        bounds.r = r;
        bounds.alpha = alpha;
        bounds.validate();
        return theoretical_prediction_bound(t, bounds);
      },
      py::arg("t"), py::arg("kappa"), py::arg("r") = 1.0,
      py::arg("alpha") = 1.0,
      "|alpha| R e^{-t/(2 kappa)}, the prediction-error ceiling.");

  m.def(
      "check_equivalence",
      [](const TaskInstance& task, std::size_t loops, const py::object& eta) {
        return check_equivalence(task,
                                 config_from(loops, eta, task.x, task.y),
                                 equivalence_tolerance(task));
      },
      py::arg("task"), py::arg("loops"), py::arg("eta") = py::none(),
      "Run the loop and gradient descent side by side; gaps vs q = -alpha "
      "theta.");
  m.def(
      "check_bound",
      [](const TaskInstance& task, std::size_t loops) {
        return check_bound(task, loops);
      },
      py::arg("task"), py::arg("loops"),
      "Check every per-step prediction error against the ceiling.");
  m.def(
      "check_attention_oracle",
      [](std::size_t n, std::size_t d, std::size_t trials,
         std::uint64_t seed) {
        RandomSource rng(seed);
        return check_attention_oracle(n, d, trials, rng);
      },
      py::arg("n"), py::arg("d"), py::arg("trials") = 100,
      py::arg("seed") = 0);

  m.def(
      "experiment_csv",
      [](std::size_t d, const std::vector<std::size_t>& n_values,
         std::size_t loops, std::size_t trials, std::uint64_t base_seed,
         double alpha) {
        ExperimentConfig config;
        config.d = d;
        config.n_values = n_values;
        config.loops = loops;
        config.trials = trials;
        config.base_seed = base_seed;
        config.alpha = alpha;
        return records_to_csv(run_experiment(config));
      },
      py::arg("d") = 4,
      py::arg("n_values") = std::vector<std::size_t>{16, 32, 64, 128},
      py::arg("loops") = 200, py::arg("trials") = 10,
      py::arg("base_seed") = 0, py::arg("alpha") = 1.0,
      "Run the convergence sweep and return the records as CSV text.");
}
