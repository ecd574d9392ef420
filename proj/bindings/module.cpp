#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kpz1d/cascade.hpp"
#include "kpz1d/dimension.hpp"
#include "kpz1d/fractal_set.hpp"
#include "kpz1d/harness.hpp"
#include "kpz1d/kpz.hpp"
#include "kpz1d/version.hpp"
#include "kpz1d/weights.hpp"

namespace py = pybind11;
using namespace kpz1d;

namespace {

py::dict estimate_dict(const DimensionEstimate& e) {
    py::dict d;
    d["value"] = e.value;
    d["stderr"] = e.stderr_;
    d["n_min"] = e.n_min;
    d["n_max"] = e.n_max;
    d["r2"] = e.fit_r2;
    d["method"] = e.method;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "random cascade metrics and the dimension relation between "
              "Euclidean and quantum exponents";
    m.attr("__version__") = kVersion;

    py::class_<WeightModel>(m, "WeightModel")
        .def_static("log_normal", &WeightModel::log_normal, py::arg("sigma2"))
        .def_static("two_point", &WeightModel::two_point, py::arg("sigma"))
        .def_static("empirical", &WeightModel::empirical, py::arg("values"),
                    py::arg("probs"))
        .def("moment", &WeightModel::moment, py::arg("s"), "E[W^s]")
        .def("phi", &WeightModel::phi, py::arg("s"), "s - log2 E[W^s]")
        .def("psi", &WeightModel::psi, py::arg("s"))
        .def("neg_moment", &WeightModel::neg_moment, py::arg("s"))
        .def("w_log2w", &WeightModel::w_log2w)
        .def("validate",
             [](const WeightModel& model) {
                 const ValidationReport r = model.validate();
                 py::dict d;
                 d["valid"] = r.valid();
                 d["mean"] = r.mean;
                 d["w_log2w"] = r.w_log2w;
                 d["message"] = r.message;
                 return d;
             })
        .def("describe", &WeightModel::describe)
        .def("__repr__", &WeightModel::describe);

    m.def("parse_weight_model", &parse_weight_model, py::arg("spec"));

    py::class_<DigitRestrictionSet>(m, "DigitRestrictionSet")
        .def(py::init<std::uint32_t, std::vector<std::uint32_t>>(),
             py::arg("block"), py::arg("allowed"))
        .def_static("full", &DigitRestrictionSet::full)
        .def_static("point", &DigitRestrictionSet::point)
        .def_property_readonly("block", &DigitRestrictionSet::block)
        .def("zeta0", &DigitRestrictionSet::zeta0,
             "exact Euclidean Hausdorff dimension")
        .def("cover_count", &DigitRestrictionSet::cover_count, py::arg("n"))
        .def("describe", &DigitRestrictionSet::describe)
        .def("__repr__", &DigitRestrictionSet::describe);

    m.def("parse_digit_set", &parse_digit_set, py::arg("spec"));

    py::class_<CascadeRealization>(m, "CascadeRealization")
        .def(py::init<WeightModel, std::uint64_t, std::uint32_t>(),
             py::arg("model"), py::arg("seed"),
             py::arg("max_level") = CascadeRealization::kDefaultMaxLevel)
        .def("ell", &CascadeRealization::ell, py::arg("n"),
             "total mass of level n")
        .def("mass",
             [](const CascadeRealization& real, std::uint32_t level,
                std::uint64_t index) {
                 return real.mass(DyadicIndex{level, index});
             },
             py::arg("level"), py::arg("index"))
        .def("cdf", &CascadeRealization::cdf, py::arg("n"), py::arg("x"))
        .def("rho", &CascadeRealization::rho, py::arg("n"), py::arg("x"),
             py::arg("y"), "depth-n cascade distance mu_n[x, y]")
        .def("max_atom", &CascadeRealization::max_atom, py::arg("n"))
        .def("recursion_residual", &CascadeRealization::recursion_residual,
             py::arg("n"));

    m.def("kpz_phi", &kpz_phi, py::arg("model"), py::arg("s"));
    m.def(
        "predict_zeta0",
        [](const WeightModel& model, double zeta) {
            return predict_zeta0(model, zeta).zeta0;
        },
        py::arg("model"), py::arg("zeta"));
    m.def(
        "solve_zeta",
        [](const WeightModel& model, double zeta0, double tol) {
            const KpzSolution sol = solve_zeta(model, zeta0, tol);
            py::dict d;
            d["zeta"] = sol.zeta;
            d["zeta0"] = sol.zeta0;
            d["residual"] = sol.residual;
            d["iterations"] = sol.iterations;
            return d;
        },
        py::arg("model"), py::arg("zeta0"), py::arg("tol") = 1e-12);
    m.def("gaussian_zeta0", &gaussian_zeta0, py::arg("sigma2"), py::arg("zeta"));
    m.def("gaussian_zeta", &gaussian_zeta, py::arg("sigma2"), py::arg("zeta0"));
    m.def("twopoint_zeta0", &twopoint_zeta0, py::arg("sigma"), py::arg("zeta"));
    m.def("central_charge", &central_charge, py::arg("sigma2"));
    m.def("sigma2_from_central_charge", &sigma2_from_central_charge, py::arg("k"));

    m.def(
        "euclid_dimension",
        [](const DigitRestrictionSet& set, std::uint32_t n_min,
           std::uint32_t n_max) {
            return estimate_dict(euclid_dimension(set, n_min, n_max));
        },
        py::arg("set"), py::arg("n_min") = 8, py::arg("n_max") = 16);

    m.def("partition_function", &partition_function, py::arg("realization"),
          py::arg("set"), py::arg("s"), py::arg("n"), py::arg("tail_depth") = 0);

    m.def(
        "quantum_dimension",
        [](const WeightModel& model, const DigitRestrictionSet& set,
           const std::vector<std::uint64_t>& seeds, std::uint32_t n_min,
           std::uint32_t n_max, std::uint32_t tail_depth, unsigned threads) {
            QuantumDimensionOptions opt;
            opt.n_min = n_min;
            opt.n_max = n_max;
            opt.tail_depth = tail_depth;
            opt.threads = threads;
            QuantumDimensionResult r;
            {
                py::gil_scoped_release release;
                r = quantum_dimension(model, set, seeds, opt);
            }
            py::dict d;
            d["estimate"] = estimate_dict(r.estimate);
            d["replicates"] = r.outcomes.size();
            d["failed"] = r.failed;
            d["clamped"] = r.clamped;
            return d;
        },
        py::arg("model"), py::arg("set"), py::arg("seeds"),
        py::arg("n_min") = 8, py::arg("n_max") = 16, py::arg("tail_depth") = 0,
        py::arg("threads") = 1);

    m.def(
        "enumerate_oracle",
        [](const WeightModel& model, std::uint32_t depth, double s) {
            const EnumeratedMoments e = enumerate_oracle(model, depth, s);
            py::dict d;
            d["cell_moment"] = e.cell_moment;
            d["total_moment"] = e.total_moment;
            d["total_neg_moment"] = e.total_neg_moment;
            d["outcomes"] = e.outcomes;
            return d;
        },
        py::arg("model"), py::arg("depth"), py::arg("s"),
        "exact moments by enumerating the finite-support weight tree");
}
