#include "dlab/reproduce.hpp"

#include "dlab/clocc.hpp"
#include "dlab/deficits.hpp"
#include "dlab/states.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace dlab::reproduce {

using deficits::Direction;
using qmat::DensityMatrix;

bool SuiteResult::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

namespace {

Row make_row(std::string name, double reference, double computed, double tol,
             bool lower_bound_only = false) {
  Row r{std::move(name), reference, computed, tol, lower_bound_only, false};
  r.pass = lower_bound_only ? computed >= reference - tol
                            : std::abs(computed - reference) <= tol;
  return r;
}

}  // namespace

SuiteResult run_paper_suite(const measure::OptimizerConfig& opt,
                            const enttools::ErConfig& er) {
  SuiteResult out;
  const double log2_3 = std::log2(3.0);

  // singlet: I = 2, I_l = 1, Delta = 1
  DensityMatrix singlet = states::singlet().projector();
  out.rows.push_back(make_row("singlet I", 2.0, qmat::information(singlet), 1e-9));
  out.rows.push_back(make_row(
      "singlet Delta (pure closed form)", 1.0,
      deficits::pure_state_deficit({states::singlet(), {0}}), 1e-9));
  auto singlet_two = deficits::twoqubit_deficit(singlet, opt);
  out.rows.push_back(make_row("singlet Delta (optimizer)", 1.0, singlet_two.value, 1e-9));
  out.rows.push_back(
      make_row("singlet Delta (protocol brute force)", 1.0,
               clocc::brute_force_deficit(singlet, opt), 1e-9));
  out.rows.push_back(
      make_row("singlet I_l", 1.0, singlet_two.companions.at("I_l"), 1e-9));

  // classically correlated pair: Delta = 0
  out.rows.push_back(make_row(
      "classically correlated Delta_oneway", 0.0,
      deficits::oneway_deficit(states::cc_pair(), Direction::AtoB, opt).value, 1e-9));

  // the separable-but-nonlocal state of the "distinguishability" example
  DensityMatrix mfs = states::mfs_state();
  out.rows.push_back(make_row("mfs I", 0.5, qmat::information(mfs), 1e-9));
  auto mfs_one = deficits::oneway_deficit(mfs, Direction::AtoB, opt);
  out.rows.push_back(make_row("mfs I_l_oneway (= 3/4 log2 3 - 1)",
                              0.75 * log2_3 - 1.0,
                              mfs_one.companions.at("I_l"), 1e-5));
  double theta = measure::bloch_angles_of(mfs_one.argmax_bases[0].vectors).theta;
  out.rows.push_back(make_row("mfs optimal basis theta (= pi/2)", M_PI / 2, theta, 1e-3));
  {
    Eigen::SelfAdjointEigenSolver<qmat::Matrix> es(qmat::partial_transpose(mfs, 1),
                                                   Eigen::EigenvaluesOnly);
    out.rows.push_back(make_row("mfs partial transpose min eigenvalue", 0.0,
                                es.eigenvalues().minCoeff(), 0.0, true));
  }
  out.rows.push_back(make_row("mfs E_r (separable)", 0.0,
                              enttools::relative_entropy_of_entanglement(mfs, er).value,
                              1e-6));

  // W state localisable information
  auto w = deficits::w_localisable(opt);
  out.rows.push_back(make_row("W state I_l", 1.45026, w.value, 1e-4));

  // GHZ family
  out.rows.push_back(
      make_row("GHZ n=4 Delta (= log2 4)", 2.0, deficits::ghz_quantities(4).deficit, 1e-12));
  {
    states::AcinParams p;
    p.a = p.e = 1.0 / std::sqrt(2.0);
    auto direct = states::ghz(3, 2).amplitudes();
    auto via_acin = states::acin_state(p).amplitudes();
    out.rows.push_back(make_row("qubit GHZ = acin(a=e=1/sqrt2) (max |diff|)", 0.0,
                                (direct - via_acin).cwiseAbs().maxCoeff(), 1e-12));
  }

  // Aharonov state
  auto ah = states::aharonov(3);
  out.rows.push_back(
      make_row("aharonov n=3 I (= 3 log2 3)", 3 * log2_3,
               qmat::information(ah.projector()), 1e-9));
  {
    double dev = 0;
    auto proj = ah.projector();
    for (int f = 0; f < 3; ++f) {
      auto marg = qmat::partial_trace(proj, {f});
      dev = std::max(dev, (marg.matrix() - qmat::Matrix::Identity(3, 3) / 3.0)
                              .cwiseAbs()
                              .maxCoeff());
    }
    out.rows.push_back(make_row("aharonov n=3 marginals = I/3 (max dev)", 0.0, dev, 1e-9));
  }
  out.rows.push_back(make_row("aharonov I_l (reported closed form)", 1.0,
                              deficits::aharonov_quantities(3).localisable, 1e-12));

  // Bell mixtures
  {
    states::BellWeights bw{{0.7, 0.1, 0.1, 0.1}};
    double closed = deficits::bell_deficit_closed_form(bw);
    double optim = deficits::twoqubit_deficit(states::bell_mixture(bw), opt).value;
    out.rows.push_back(
        make_row("bell(0.7,0.1,0.1,0.1) closed form vs optimizer (|diff|)", 0.0,
                 std::abs(closed - optim), 1e-6));
    out.rows.push_back(make_row(
        "bell(0.7,...) E_r (= 1 - H(0.7))", enttools::er_bell_diagonal_closed_form(bw),
        enttools::relative_entropy_of_entanglement(states::bell_mixture(bw), er).value,
        1e-4));
  }

  // isotropic states
  out.rows.push_back(
      make_row("isotropic Delta at lambda=1,d=2", 1.0, deficits::isotropic_deficit(1, 2), 1e-12));
  out.rows.push_back(
      make_row("isotropic Delta at lambda=0,d=2", 0.0, deficits::isotropic_deficit(0, 2), 1e-12));
  {
    double formula = deficits::isotropic_deficit(0.5, 2);
    double optim =
        deficits::oneway_deficit(states::isotropic(0.5, 2), Direction::AtoB, opt).value;
    out.rows.push_back(make_row("isotropic lambda=1/2 formula vs optimizer (|diff|)",
                                0.0, std::abs(formula - optim), 1e-6));
  }

  // BB84-type mixture: nonvanishing zero-way deficit
  out.rows.push_back(make_row(
      "bb84(0.4,0.3,0.2,0.1) Delta_zeroway > 0", 1e-3,
      deficits::zeroway_deficit(states::bb84_mixture({{0.4, 0.3, 0.2, 0.1}}), opt).value,
      0.0, true));

  // entanglement bounds
  out.rows.push_back(make_row(
      "singlet E_r", 1.0,
      enttools::relative_entropy_of_entanglement(singlet, er).value, 2e-4));
  {
    auto bracket = enttools::erasure_cost_bracket(singlet, opt, er);
    out.rows.push_back(
        make_row("singlet erasure bracket lower (= 1)", 1.0, bracket.lower, 2e-4));
    out.rows.push_back(
        make_row("singlet erasure bracket upper (= 1)", 1.0, bracket.upper, 1e-9));
  }
  {
    auto check = enttools::supersaturation_check(states::bell_phi_plus().projector(), er);
    out.rows.push_back(make_row("supersaturation tight at phi+ (lhs = rhs = 2)",
                                check.rhs, check.lhs, 5e-4));
  }

  // errata: places where the printed expressions disagree with their own
  // anchors; the consistent readings are the ones implemented
  out.errata.push_back(
      {"mfs deficit line", "Delta = .1887",
       "0.1887 = I_l; Delta = I - I_l = 0.311278 (optimizer agrees)"});
  out.errata.push_back(
      {"Bell zero-way display", "Delta_0 = 1 + H(p_max)",
       "Delta_0 = 1 + H(p_max) - S(rho_Bm); the flat mixture then scores 0"});
  out.errata.push_back(
      {"isotropic deficit display", "evaluates to -log2(d) at lambda=1",
       "Delta = log2(d) + S_cond - S(rho_iso); anchors at lambda=0,1 and the "
       "optimizer agree"});
  out.errata.push_back(
      {"aharonov localisable information", "I_l = 1 for every n",
       "the executed ledger localizes 2*log2(n) - 1 bits at n=3 (the final "
       "pair is counted as qubits in the printed value); the concentration "
       "stage itself localizes exactly 1 bit"});
  return out;
}

void print_table(std::ostream& os, const SuiteResult& result) {
  os << "quantity | paper value | computed | tolerance | pass\n";
  for (const auto& r : result.rows) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%-55s | %12.9g | %12.9g | %c%8.1e | %s\n",
                  r.name.c_str(), r.reference, r.computed,
                  r.lower_bound_only ? '>' : ' ', r.tolerance,
                  r.pass ? "pass" : "FAIL");
    os << buf;
  }
  os << "\npaper-erratum section (both readings shown; the consistent one is "
        "implemented):\n";
  for (const auto& e : result.errata)
    os << "  - " << e.name << ": printed \"" << e.printed_reading << "\" -> "
       << e.consistent_reading << "\n";
}

}  // namespace dlab::reproduce
