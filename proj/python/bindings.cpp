// pybind11 module exposing the main operations of the core library.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maryland/bands.hpp"
#include "maryland/oracle.hpp"
#include "maryland/resolvent.hpp"
#include "maryland/scattering.hpp"
#include "maryland/verify.hpp"

namespace py = pybind11;
using namespace maryland;

namespace {

XVec to_xvec(const std::vector<int>& v) {
  if (v.size() > 4) throw BadConfig("lattice points have at most 4 components");
  XVec x;
  x.n = int(v.size());
  for (size_t i = 0; i < v.size(); ++i) x.c[i] = v[i];
  return x;
}

KVec to_kvec(const std::vector<double>& v) {
  if (v.size() > 4) throw BadConfig("momenta have at most 4 components");
  KVec k;
  k.n = int(v.size());
  for (size_t i = 0; i < v.size(); ++i) k.c[i] = v[i];
  return k;
}

ComplexEnergy to_energy(Complex z, const std::string& side) {
  if (side == "upper") return ComplexEnergy::upper(z.real());
  if (side == "lower") return ComplexEnergy::lower(z.real());
  return ComplexEnergy::off(z);
}

}  // namespace

PYBIND11_MODULE(_maryland, m) {
  m.doc() = "discrete Schrodinger operator with surface Maryland potential";

  py::register_exception<NumericError>(m, "NumericError");
  py::register_exception<BadConfig>(m, "BadConfig");

  py::class_<Alpha>(m, "Alpha")
      .def_static("rational", &Alpha::make_rational, py::arg("p"), py::arg("q"))
      .def_static("irrational", py::overload_cast<double>(&Alpha::make_irrational),
                  py::arg("value"))
      .def_static("golden", &Alpha::golden)
      .def_readonly("is_rational", &Alpha::rational)
      .def_readonly("p", &Alpha::p)
      .def_readonly("q", &Alpha::q)
      .def_property_readonly("value", [](const Alpha& a) {
        return std::vector<double>(a.value.c.begin(), a.value.c.begin() + a.dim());
      });

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](int d1, int d2, double g, Alpha alpha, double omega) {
             ModelParams p;
             p.d1 = d1;
             p.d2 = d2;
             p.g = g;
             p.alpha = alpha;
             p.omega = omega;
             p.validate();
             return p;
           }),
           py::arg("d1") = 1, py::arg("d2") = 1, py::arg("g") = 1.0,
           py::arg("alpha") = Alpha::golden(), py::arg("omega") = 0.0)
      .def_readonly("d1", &ModelParams::d1)
      .def_readonly("d2", &ModelParams::d2)
      .def_readonly("g", &ModelParams::g)
      .def_readonly("omega", &ModelParams::omega)
      .def_readonly("alpha", &ModelParams::alpha)
      .def_property_readonly("d", &ModelParams::d);

  py::class_<GreenValue>(m, "GreenValue")
      .def_readonly("value", &GreenValue::value)
      .def_readonly("err", &GreenValue::err)
      .def("__repr__", [](const GreenValue& g) {
        return "GreenValue(" + std::to_string(g.value.real()) + (g.value.imag() < 0 ? "-" : "+") +
               std::to_string(std::abs(g.value.imag())) + "j, err=" + std::to_string(g.err) + ")";
      });

  m.def(
      "eta", [](Complex z, const std::string& side) { return eta(to_energy(z, side)); },
      py::arg("z"), py::arg("side") = "off");
  m.def(
      "green_1d",
      [](long x, Complex z, const std::string& side) { return green_1d(x, to_energy(z, side)); },
      py::arg("x"), py::arg("z"), py::arg("side") = "off");
  m.def(
      "green_nd",
      [](int nu, const std::vector<int>& x, Complex z, const std::string& side, double err) {
        return green_nd(nu, to_xvec(x), to_energy(z, side), err);
      },
      py::arg("nu"), py::arg("x"), py::arg("z"), py::arg("side") = "off",
      py::arg("target_err") = 1e-10);
  m.def("green_nd_boundary",
        [](int nu, const std::vector<int>& x, double E, const std::string& side, double err) {
          return green_nd_boundary(nu, to_xvec(x), E,
                                   side == "lower" ? Side::lower : Side::upper, err);
        },
        py::arg("nu"), py::arg("x"), py::arg("E"), py::arg("side") = "upper",
        py::arg("target_err") = 1e-8);
  m.def("dos_1d", &dos_1d, py::arg("E"));

  m.def(
      "potential_v",
      [](const std::vector<int>& x2, const ModelParams& p) { return potential_v(to_xvec(x2), p); },
      py::arg("x2"), py::arg("params"));
  m.def(
      "energy_symbol",
      [](const std::vector<double>& k, int nu) { return energy_symbol(to_kvec(k), nu); },
      py::arg("k"), py::arg("nu"));
  m.def(
      "gamma0_hat",
      [](const std::vector<double>& k2, Complex z, const std::string& side,
         const ModelParams& p) { return gamma0_hat(to_kvec(k2), to_energy(z, side), p); },
      py::arg("k2"), py::arg("z"), py::arg("side"), py::arg("params"));
  m.def(
      "b_hat",
      [](const std::vector<double>& k2, Complex z, const std::string& side,
         const ModelParams& p) { return b_hat(to_kvec(k2), to_energy(z, side), p); },
      py::arg("k2"), py::arg("z"), py::arg("side"), py::arg("params"));
  m.def(
      "partial_product",
      [](long mm, const std::vector<double>& k2, Complex z, const std::string& side,
         const ModelParams& p) { return partial_product(mm, to_kvec(k2), to_energy(z, side), p); },
      py::arg("m"), py::arg("k2"), py::arg("z"), py::arg("side"), py::arg("params"));
  m.def(
      "t_coefficient",
      [](long mm, const std::vector<double>& k2, Complex z, const std::string& side,
         const ModelParams& p) { return t_coefficient(mm, to_kvec(k2), to_energy(z, side), p); },
      py::arg("m"), py::arg("k2"), py::arg("z"), py::arg("side"), py::arg("params"));
  m.def(
      "k_gamma_membership",
      [](const std::vector<double>& k2, double E, double gamma, const ModelParams& p) {
        return k_gamma_membership(to_kvec(k2), E, gamma, p);
      },
      py::arg("k2"), py::arg("E"), py::arg("gamma"), py::arg("params"));

  py::class_<SeriesControl>(m, "SeriesControl")
      .def(py::init<>())
      .def_readwrite("tol", &SeriesControl::tol)
      .def_readwrite("max_terms", &SeriesControl::max_terms)
      .def_readwrite("gamma", &SeriesControl::gamma)
      .def_readwrite("quad_points", &SeriesControl::quad_points);

  m.def(
      "green_full_qp",
      [](const std::vector<int>& x, const std::vector<int>& y, Complex z,
         const std::string& side, const ModelParams& p, const SeriesControl& ctrl) {
        return green_full_qp(to_xvec(x), to_xvec(y), to_energy(z, side), p, ctrl);
      },
      py::arg("x"), py::arg("y"), py::arg("z"), py::arg("side"), py::arg("params"),
      py::arg("ctrl") = SeriesControl{});
  m.def(
      "green_full_periodic",
      [](const std::vector<int>& x, const std::vector<int>& y, Complex z,
         const std::string& side, const ModelParams& p, int n) {
        return green_full_periodic(to_xvec(x), to_xvec(y), to_energy(z, side), p, n);
      },
      py::arg("x"), py::arg("y"), py::arg("z"), py::arg("side"), py::arg("params"),
      py::arg("quad_points") = 8192);
  m.def(
      "green_constant_potential",
      [](const std::vector<int>& x, const std::vector<int>& y, Complex z,
         const std::string& side, const ModelParams& p, Complex v) {
        return green_constant_potential(to_xvec(x), to_xvec(y), to_energy(z, side), p, v);
      },
      py::arg("x"), py::arg("y"), py::arg("z"), py::arg("side"), py::arg("params"), py::arg("v"));

  py::class_<LyapunovResult>(m, "LyapunovResult")
      .def_readonly("birkhoff", &LyapunovResult::birkhoff)
      .def_readonly("integral", &LyapunovResult::integral)
      .def_readonly("gap", &LyapunovResult::gap);
  m.def("lyapunov_exponent", &lyapunov_exponent, py::arg("E"), py::arg("params"),
        py::arg("m_max") = 10000);

  py::enum_<StateSign>(m, "StateSign")
      .value("plus", StateSign::plus)
      .value("minus", StateSign::minus);
  py::enum_<ChannelClass>(m, "ChannelClass")
      .value("volume", ChannelClass::volume)
      .value("surface", ChannelClass::surface);

  py::class_<ChannelTerm>(m, "ChannelTerm")
      .def_readonly("m", &ChannelTerm::m)
      .def_readonly("coefficient", &ChannelTerm::coefficient)
      .def_readonly("lam", &ChannelTerm::lambda)
      .def_readonly("eta", &ChannelTerm::eta_m)
      .def_readonly("amplitude", &ChannelTerm::amplitude)
      .def_readonly("cls", &ChannelTerm::cls);

  py::class_<ScatteringState>(m, "ScatteringState")
      .def_readonly("energy", &ScatteringState::energy)
      .def_readonly("terms", &ScatteringState::terms)
      .def("eval",
           [](const ScatteringState& s, const std::vector<int>& x) { return s.eval(to_xvec(x)); })
      .def("__call__",
           [](const ScatteringState& s, const std::vector<int>& x) { return s.eval(to_xvec(x)); });

  m.def(
      "psi_qp",
      [](const std::vector<double>& k, StateSign sign, const ModelParams& p,
         const SeriesControl& ctrl) { return psi_qp(to_kvec(k), sign, p, ctrl); },
      py::arg("k"), py::arg("sign"), py::arg("params"), py::arg("ctrl") = SeriesControl{});
  m.def(
      "psi_periodic_volume",
      [](const std::vector<double>& k, StateSign sign, const ModelParams& p) {
        return psi_periodic_volume(to_kvec(k), sign, p);
      },
      py::arg("k"), py::arg("sign"), py::arg("params"));
  m.def("psi_periodic_surface", &psi_periodic_surface, py::arg("k2"), py::arg("j"),
        py::arg("sign"), py::arg("params"));
  m.def(
      "schrodinger_residual",
      [](const ScatteringState& s, const ModelParams& p, int window) {
        return schrodinger_residual(s.evaluator(), s.energy, p, window);
      },
      py::arg("state"), py::arg("params"), py::arg("window") = 8);

  py::class_<LSResidual>(m, "LSResidual")
      .def_readonly("residual", &LSResidual::residual)
      .def_readonly("tail_estimate", &LSResidual::tail_estimate);
  m.def(
      "lippmann_schwinger_residual",
      [](const std::vector<double>& k, StateSign sign, const ModelParams& p, int window,
         bool mismatch) {
        return lippmann_schwinger_residual(to_kvec(k), sign, p, window, SeriesControl{},
                                           mismatch);
      },
      py::arg("k"), py::arg("sign"), py::arg("params"), py::arg("window_x2") = 512,
      py::arg("mismatch_kernel_side") = false);
  m.def("split_volume_surface", &split_volume_surface, py::arg("state"));

  py::class_<Amplitudes>(m, "Amplitudes")
      .def_readonly("t0", &Amplitudes::t0)
      .def_readonly("r0", &Amplitudes::r0)
      .def_readonly("open_channels", &Amplitudes::open_channels);
  m.def(
      "amplitudes",
      [](const std::vector<double>& k, const ModelParams& p) {
        return amplitudes(to_kvec(k), p);
      },
      py::arg("k"), py::arg("params"));

  m.def("phase_phi", &phase_phi, py::arg("k2"), py::arg("E"), py::arg("g"));
  m.def("phase_Phi_q", &phase_Phi_q, py::arg("k2"), py::arg("E"), py::arg("params"));
  m.def(
      "solve_band",
      [](int j, double k2, const ModelParams& p) -> py::object {
        auto e = solve_band(j, k2, p);
        if (!e) return py::none();
        return py::float_(*e);
      },
      py::arg("j"), py::arg("k2"), py::arg("params"));

  py::class_<BandFunction>(m, "BandFunction")
      .def_readonly("j", &BandFunction::j)
      .def_readonly("q", &BandFunction::q)
      .def_readonly("samples", &BandFunction::samples)
      .def_readonly("domain", &BandFunction::domain)
      .def_readonly("excluded", &BandFunction::excluded)
      .def("emin", &BandFunction::emin)
      .def("emax", &BandFunction::emax);
  m.def("band_curve", &band_curve, py::arg("j"), py::arg("params"), py::arg("n_samples") = 512);

  py::class_<SpectrumInterval>(m, "SpectrumInterval")
      .def_readonly("lo", &SpectrumInterval::lo)
      .def_readonly("hi", &SpectrumInterval::hi)
      .def_readonly("provenance", &SpectrumInterval::provenance);
  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("intervals", &Spectrum::intervals)
      .def("contains", &Spectrum::contains, py::arg("E"), py::arg("tol") = 1e-12);
  m.def("assemble_spectrum", &assemble_spectrum, py::arg("params"), py::arg("max_j_scan") = 64);

  py::class_<BandDiagnostics::BandInfo>(m, "BandInfo")
      .def_readonly("j", &BandDiagnostics::BandInfo::j)
      .def_readonly("emin", &BandDiagnostics::BandInfo::emin)
      .def_readonly("emax", &BandDiagnostics::BandInfo::emax)
      .def_readonly("width", &BandDiagnostics::BandInfo::width);
  py::class_<BandDiagnostics>(m, "BandDiagnostics")
      .def_readonly("bands", &BandDiagnostics::bands)
      .def_readonly("min_separation", &BandDiagnostics::min_separation)
      .def_readonly("delta_phi", &BandDiagnostics::delta_phi)
      .def_readonly("phi_fourier", &BandDiagnostics::phi_fourier);
  m.def("band_diagnostics", &band_diagnostics, py::arg("params"), py::arg("n_samples") = 512);
  m.def("critical_energies", &critical_energies, py::arg("params"), py::arg("n_samples") = 512);
  m.def("diophantine_f", &diophantine_f, py::arg("E"), py::arg("g"));

  py::class_<LimitRow>(m, "LimitRow")
      .def_readonly("n", &LimitRow::n)
      .def_readonly("p", &LimitRow::p)
      .def_readonly("q", &LimitRow::q)
      .def_readonly("x2", &LimitRow::x2)
      .def_readonly("has_root", &LimitRow::has_root)
      .def_readonly("E_diophantine", &LimitRow::E_diophantine)
      .def_readonly("band_mid", &LimitRow::band_mid)
      .def_readonly("distance", &LimitRow::distance);
  m.def("limit_comparison", &limit_comparison, py::arg("alpha_target"), py::arg("convergents"),
        py::arg("x2_range"), py::arg("params"));

  py::class_<BoxSpec>(m, "BoxSpec")
      .def(py::init([](int L1, int L2) { return BoxSpec{L1, L2}; }), py::arg("L1") = 40,
           py::arg("L2") = 40)
      .def_readwrite("L1", &BoxSpec::L1)
      .def_readwrite("L2", &BoxSpec::L2);
  py::class_<StripSpec>(m, "StripSpec")
      .def(py::init([](long q, double k2, int L1) { return StripSpec{q, k2, L1}; }),
           py::arg("q"), py::arg("k2"), py::arg("L1") = 200)
      .def_readwrite("q", &StripSpec::q)
      .def_readwrite("k2", &StripSpec::k2)
      .def_readwrite("L1", &StripSpec::L1);
  py::class_<StripEigen>(m, "StripEigen")
      .def_readonly("value", &StripEigen::value)
      .def_readonly("surface_weight", &StripEigen::surface_weight)
      .def_readonly("surface_candidate", &StripEigen::surface_candidate);

  m.def(
      "box_resolvent",
      [](const std::vector<int>& x, const std::vector<int>& y, Complex z, const ModelParams& p,
         const BoxSpec& box) {
        return box_resolvent(to_xvec(x), to_xvec(y), ComplexEnergy::off(z), p, box);
      },
      py::arg("x"), py::arg("y"), py::arg("z"), py::arg("params"), py::arg("box") = BoxSpec{});
  m.def("strip_eigenvalues", &strip_eigenvalues, py::arg("params"), py::arg("strip"));
  m.def(
      "quadrature_green",
      [](int nu, const std::vector<int>& x, Complex z, long n) {
        return quadrature_green(nu, to_xvec(x), z, n);
      },
      py::arg("nu"), py::arg("x"), py::arg("z"), py::arg("n_min") = 1024);

  m.def("verify_suite", [](const std::string& suite) {
    py::list out;
    for (auto& r : verify::run_suite(suite)) {
      py::dict d;
      d["name"] = r.name;
      d["pass"] = r.pass;
      d["value"] = r.value;
      d["tol"] = r.tol;
      out.append(d);
    }
    return out;
  });
}
