#include "cstar/runner.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <memory>

#include "cstar/cgns.hpp"
#include "cstar/dilation.hpp"
#include "cstar/ergodic.hpp"
#include "cstar/error.hpp"

namespace cstar {

namespace {

using nlohmann::json;

// Keeps the largest residual per id, so a check evaluated on many inputs
// appears once.
void merge_max(Checks& into, const Checks& more) {
  for (const auto& c : more) {
    auto it = std::find_if(into.begin(), into.end(), [&](const Check& x) { return x.id == c.id; });
    if (it == into.end()) {
      into.push_back(c);
    } else if (!(it->residual >= c.residual)) {
      it->residual = c.residual;
    }
  }
}

json checks_to_data(const Checks& checks) {
  json out = json::object();
  for (const auto& c : checks) out[c.id] = {{"residual", c.residual}, {"threshold", c.threshold}};
  return out;
}

// Lazily built objects shared by the commands of one run.
class Pipeline {
 public:
  Pipeline(const SystemSpec& spec, const RunOptions& options, Report& report)
      : spec_(spec), opt_(options), report_(report) {
    base_ = options.tol.value_or(spec.tolerance);
    seed_ = options.seed.value_or(spec.seed);
  }

  const SystemSpec& spec() const { return spec_; }
  const RunOptions& options() const { return opt_; }
  Report& report() { return report_; }
  double tight() const { return base_; }
  double loose() const { return 10.0 * base_; }
  double equiv() const { return 100.0 * base_; }
  std::uint64_t seed() const { return seed_; }
  bool faithful() const { return spec_.state.faithful(); }

  template <class F>
  auto timed(const std::string& stage, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    auto result = f();
    const std::chrono::duration<double, std::milli> ms = std::chrono::steady_clock::now() - start;
    report_.timings[stage] += ms.count();
    return result;
  }

  void add(const Checks& checks) { merge_max(report_.checks, checks); }
  void add(const Check& check) { merge_max(report_.checks, Checks{check}); }
  void skip(const std::string& what) {
    if (std::find(report_.skipped.begin(), report_.skipped.end(), what) == report_.skipped.end()) {
      report_.skipped.push_back(what);
    }
  }
  json& data(const std::string& section) { return report_.data[section]; }

  const GnsData& gns() {
    if (!gns_) gns_ = std::make_unique<GnsData>(timed("gns", [&] { return gns_construct(spec_.algebra, spec_.state); }));
    return *gns_;
  }

  const CMatrix& transfer() {
    if (!u_) u_ = std::make_unique<CMatrix>(timed("transfer", [&] { return transfer_contraction(gns(), spec_.phi); }));
    return *u_;
  }

  bool homomorphism() const { return is_homomorphism(spec_.phi); }

  std::shared_ptr<const Tower> tower() {
    if (!tower_) {
      tower_ = timed("tower", [&] {
        return std::make_shared<const Tower>(build_tower(spec_.phi, spec_.state, depth()));
      });
    }
    return tower_;
  }

  std::size_t depth() const {
    if (opt_.depth == 0) throw Error(ErrorKind::ValidationError, "--depth must be at least 1");
    return opt_.depth;
  }

  const CgnsData& cgns() {
    if (!cgns_) cgns_ = std::make_unique<CgnsData>(timed("cgns", [&] { return cgns_operators(tower()); }));
    return *cgns_;
  }

  /// Number of V_inf applications requested; only a unitary V_inf may go
  /// beyond the tower depth.
  std::size_t budget() {
    const std::size_t k = opt_.budget.value_or(depth());
    if (k > depth() && !cgns().v_total) {
      throw Error(ErrorKind::BudgetExceeded,
                  "budget " + std::to_string(k) + " exceeds depth " + std::to_string(depth()) +
                      " and V_inf is not unitary");
    }
    return k;
  }

  /// The phi-adjoint or the reason it is unavailable.
  const std::optional<UcpMap>& adjoint() {
    if (!adjoint_done_) {
      adjoint_done_ = true;
      if (!faithful()) {
        adjoint_reason_ = "state is not faithful";
      } else {
        try {
          adjoint_ = timed("adjoint", [&] { return phi_adjoint(spec_.phi, spec_.state, loose()); });
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::ModularObstruction) throw;
          adjoint_reason_ = e.what();
        }
      }
    }
    return adjoint_;
  }
  const std::string& adjoint_reason() const { return adjoint_reason_; }

  /// Reversible dilation when the dynamics is multiplicative with a
  /// phi-adjoint; nullptr after recording why not.
  const DilationData* dilation(const std::string& who) {
    if (!dilation_done_) {
      dilation_done_ = true;
      if (!homomorphism()) {
        dilation_reason_ = "dynamics is not multiplicative";
      } else if (!adjoint()) {
        dilation_reason_ = "no phi-adjoint: " + adjoint_reason();
      } else {
        const std::size_t k = budget();
        dilation_ = std::make_unique<DilationData>(
            timed("dilation", [&] { return build_dilation(cgns(), *adjoint_, k, loose()); }));
      }
    }
    if (!dilation_) skip(who + ": " + dilation_reason_);
    return dilation_.get();
  }

 private:
  const SystemSpec& spec_;
  RunOptions opt_;
  Report& report_;
  double base_ = kDefaultTol;
  std::uint64_t seed_ = 0;

  std::unique_ptr<GnsData> gns_;
  std::unique_ptr<CMatrix> u_;
  std::shared_ptr<const Tower> tower_;
  std::unique_ptr<CgnsData> cgns_;
  bool adjoint_done_ = false;
  std::optional<UcpMap> adjoint_;
  std::string adjoint_reason_;
  bool dilation_done_ = false;
  std::unique_ptr<DilationData> dilation_;
  std::string dilation_reason_;
};

void cmd_validate(Pipeline& p) {
  const SystemSpec& s = p.spec();
  const Algebra& alg = s.algebra;
  const double unital = (s.phi(alg.unit()) - alg.unit()).norm();
  double choi_neg = 0.0;
  for (const auto& b : s.phi.choi()) {
    choi_neg = std::max(choi_neg, -herm_eig(hermitize(b.choi), 1.0).eigenvalues.minCoeff());
  }
  double state_neg = 0.0;
  cplx trace = 0.0;
  for (const auto& rho : s.state.densities()) {
    state_neg = std::max(state_neg, -herm_eig(hermitize(rho), 1.0).eigenvalues.minCoeff());
    trace += rho.trace();
  }
  const std::string anchor = "C*-dynamical system";
  p.add({{"validate.choi_psd", "negative part of the Choi matrix", std::max(choi_neg, 0.0), p.loose(), anchor},
         {"validate.state_psd", "negative part of the state densities", std::max(state_neg, 0.0), p.loose(), anchor},
         {"validate.state_trace", "|tr(rho) - 1|", std::abs(trace - 1.0), p.loose(), anchor},
         {"validate.unital", "|Phi(1) - 1|", unital, p.loose(), anchor}});
  Check inv = check_invariance(s.phi, s.state, p.loose());
  inv.id = "validate.invariance";
  p.add(inv);
  json& d = p.data("validate");
  d["blocks"] = alg.block_dims();
  d["faithful"] = s.state.faithful();
  d["homomorphism"] = p.homomorphism();
  d["kraus_rank"] = s.phi.kraus().size();
  d["multiplicative_domain_dim"] = multiplicative_domain(s.phi).dim();
}

void cmd_gns(Pipeline& p) {
  const GnsData& g = p.gns();
  p.add(verify_gns(g, p.tight()));
  const CMatrix& u = p.transfer();
  p.add(verify_transfer(g, p.spec().phi, u, p.tight()));
  json& d = p.data("gns");
  d["dim"] = g.dim;
  d["transfer_norm"] = op_norm(u);
  d["transfer_unitary_residual"] = fro_norm(u.adjoint() * u - identity(g.dim)) + fro_norm(u * u.adjoint() - identity(g.dim));
  d["transfer_idempotent_residual"] = fro_norm(u * u - u);
  try {
    const WSystem w = p.timed("w_system", [&] { return induce_w_system(g, u); });
    d["w_system_dim"] = w.vn_basis.dim();
    d["separating_margin"] = w.separating_margin;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotSeparating) throw;
    p.skip(std::string("gns: induced W*-system: ") + e.what());
  }
}

void cmd_stinespring(Pipeline& p) {
  const GnsData& g = p.gns();
  const CMatrix& u = p.transfer();
  const auto phi0 = lifted_on_basis(g, p.spec().phi);
  const StinespringData s1 = p.timed("stinespring", [&] { return stinespring(g.algebra, phi0); });
  p.add(verify_stinespring(s1, phi0, p.tight()));
  const Subspace dom = multiplicative_domain(g.algebra, phi0);
  const MdCommutationReport md = check_md_commutation(s1, dom, p.loose());
  p.add(md.checks);
  const CMatrix l0 = lambda0(g, s1, p.tight());
  p.add(verify_lambda0(g, s1, l0, u, p.tight()));
  json& d = p.data("stinespring");
  d["source_dim"] = s1.source_dim;
  d["dilation_dim"] = s1.dilation_dim;
  d["multiplicative_domain_dim"] = dom.dim();
  d["v_unitary"] = md.v_unitary;
}

void cmd_tower(Pipeline& p) {
  const auto t = p.tower();
  p.add(p.timed("verify_tower", [&] { return verify_tower(*t, p.loose()); }));
  json dims = json::array();
  for (std::size_t n = 0; n <= t->depth; ++n) dims.push_back(t->dim(n));
  p.data("tower")["dims"] = dims;
  p.data("tower")["depth"] = t->depth;
}

void cmd_cgns(Pipeline& p) {
  const CgnsData& c = p.cgns();
  const Tower& t = *c.tower;
  p.add(p.timed("verify_cgns", [&] { return verify_cgns(c, p.loose()); }));

  double span_defect = 0.0;
  json spans = json::array();
  for (std::size_t n = 0; n <= t.depth; ++n) {
    const Eigen::Index k = p.timed("cyclic_span", [&] { return cyclic_span_dimension(c, n); });
    spans.push_back(k);
    span_defect = std::max(span_defect, std::abs(static_cast<double>(k - t.dim(n))));
  }
  p.add({"cgns.cyclic_span", "max_n |dim span d_0(a_0)...d_n(a_n) Omega - dim L_n|", span_defect, 0.0,
         "cyclicity of Omega_inf"});

  // Second tower with permuted Gram assembly and rotated coordinates.
  TowerOptions other;
  other.permutation_seed = 2 * p.seed() + 101;
  other.gauge_seed = 2 * p.seed() + 103;
  const CgnsData c2 = p.timed("uniqueness", [&] {
    return cgns_operators(std::make_shared<const Tower>(build_tower(p.spec().phi, p.spec().state, t.depth, other)));
  });
  const Equivalence eq = p.timed("uniqueness", [&] { return unitary_equivalence(c, c2, p.equiv()); });
  p.add(eq.checks);

  json& d = p.data("cgns");
  d["ambient_dim"] = c.ambient_dim;
  d["v_total"] = c.v_total;
  d["cyclic_span_dims"] = spans;

  if (!p.homomorphism()) {
    p.skip("cgns-verify: norm comparison: dynamics is not multiplicative");
    return;
  }
  try {
    Checks norms;
    const Algebra& alg = t.algebra;
    for (Eigen::Index i = 0; i < alg.total_dim(); ++i) {
      merge_max(norms, norm_compare(c, alg.basis_element(i), p.loose()).checks);
    }
    std::mt19937_64 rng(p.seed() + 5);
    for (int trial = 0; trial < 4; ++trial) {
      merge_max(norms, norm_compare(c, alg.element(random_complex(alg.total_dim(), 1, rng).col(0)), p.loose()).checks);
    }
    p.add(norms);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PreconditionFailed) throw;
    p.skip(std::string("cgns-verify: norm comparison: ") + e.what());
  }
}

void cmd_adjoint(Pipeline& p) {
  if (!p.faithful()) {
    p.skip("adjoint: state is not faithful");
    return;
  }
  const GnsData& g = p.gns();
  const CMatrix& u = p.transfer();
  const ModularPair m = p.timed("modular", [&] { return modular_pair(g, p.loose()); });
  p.add(m.certificates);
  const Checks comm = modular_commutation_check(u, m, {0.5, 1.0, 1.4142135623730951}, p.loose());
  const auto& adj = p.adjoint();
  const bool commutes = all_pass(comm);
  const std::string anchor = "phi-adjoint criterion";
  p.add({"adjoint.equivalence", "phi-adjoint exists iff U commutes with the modular data",
         (adj.has_value() == commutes) ? 0.0 : 1.0, 0.0, anchor});
  json& d = p.data("adjoint");
  d["commutation"] = checks_to_data(comm);
  if (!adj) {
    d["outcome"] = "ModularObstruction";
    d["reason"] = p.adjoint_reason();
    return;
  }
  p.add(comm);
  const UcpMap& a = *adj;
  p.add({"adjoint.adjunction", "max |phi(a Phi#(b)) - phi(Phi(a) b)|", adjunction_residual(p.spec().phi, a, p.spec().state),
         p.tight(), anchor});
  Check inv = check_invariance(a, p.spec().state, p.loose());
  inv.id = "adjoint.invariance";
  inv.anchor = anchor;
  p.add(inv);
  d["outcome"] = "exists";
  d["superop"] = matrix_to_json(a.superop());
}

void cmd_dilate(Pipeline& p) {
  const DilationData* d = p.dilation("dilate");
  if (!d) return;
  p.add(d->certificates);
  for (std::size_t n = 0; n <= d->budget; ++n) p.add(verify_dilation_diagram(*d, n, p.loose()));
  const MinimalityReport mr = minimality_and_separating(*d, nullptr, p.loose());
  p.add(mr.checks);

  // A vector killed by part of the big algebra must fail the separating test.
  const CVector bad = non_separating_vector(*d, p.seed() + 7);
  const MinimalityReport control = minimality_and_separating(*d, &bad, p.loose());
  const Check* sep = find_check(control.checks, "minimality.separating");
  p.add({"dilation.negative_control", "separating test rejects a non-separating vector",
         sep && !sep->pass() ? 0.0 : 1.0, 0.0, "separating vector"});

  json& j = p.data("dilate");
  j["budget"] = d->budget;
  j["big_algebra_dim"] = d->big_algebra.dim();
  j["generated_dim"] = mr.generated_dim;
  j["separating_margin"] = mr.separating_margin;
  j["control_margin"] = control.separating_margin;
}

void cmd_ergodic(Pipeline& p) {
  ClassifyOptions co;
  co.tol = p.loose();
  const ErgodicReport r = p.timed("classify", [&] { return classify(p.spec().phi, p.spec().state, co); });
  p.add(r.checks);
  json& j = p.data("ergodic");
  j["ergodic"] = r.ergodic;
  j["weakly_mixing"] = r.weakly_mixing;
  j["fixed_space_dim"] = r.fixed_space_dim;
  j["spectral_gap"] = r.spectral_gap;
  j["conclusive"] = r.conclusive;
  j["cesaro_residuals"] = r.cesaro_residuals;
  json per = json::array();
  for (const cplx z : r.peripheral_eigenvalues) per.push_back(json::array({z.real(), z.imag()}));
  j["peripheral_eigenvalues"] = per;

  const DilationData* d = p.dilation("ergodic transfer");
  if (!d) return;
  TransferOptions to;
  to.tol = p.loose();
  to.seed = p.seed() + 3;
  const TransferReport tr = p.timed("transfer_check", [&] { return dilation_transfer_check(*d, to); });
  p.add(tr.checks);
  j["dilated_cesaro"] = tr.dilated_cesaro;
  j["original_cesaro"] = tr.original_cesaro;
}

void cmd_right_inverse(Pipeline& p) {
  const SystemSpec& s = p.spec();
  if (!s.section) {
    p.skip("right-inverse: no section in the input");
    return;
  }
  json& j = p.data("right_inverse");
  try {
    const RightInverseReport r = p.timed("right_inverse", [&] {
      return right_inverse_analyzer(s.phi, *s.section, s.state, p.depth(), p.loose());
    });
    p.add(r.checks);
    j["section_residual"] = r.section_residual;
    j["dilation_built"] = r.dilation_built;
  } catch (const SectionError& e) {
    j["witness"] = e.witness();
    j["section_residual"] = e.residual();
    throw;
  }
}

using Command = void (*)(Pipeline&);

const std::map<std::string, Command>& table() {
  static const std::map<std::string, Command> t = {
      {"validate", cmd_validate}, {"gns", cmd_gns},         {"stinespring", cmd_stinespring},
      {"tower", cmd_tower},       {"cgns-verify", cmd_cgns}, {"adjoint", cmd_adjoint},
      {"dilate", cmd_dilate},     {"ergodic", cmd_ergodic},  {"right-inverse", cmd_right_inverse},
  };
  return t;
}

void run_one(const std::string& name, Pipeline& p) {
  try {
    table().at(name)(p);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ValidationError) throw;
    std::string message = e.what();
    const std::string prefix = std::string(to_string(e.kind())) + ": ";
    if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
    p.report().errors.push_back({name, std::string(to_string(e.kind())), message});
  }
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"validate", "gns",    "stinespring", "tower",         "cgns-verify",
                                                 "adjoint",  "dilate", "ergodic",     "right-inverse", "all"};
  return names;
}

bool is_command(const std::string& name) {
  const auto& n = command_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

Report run(const std::string& command, const SystemSpec& spec, const RunOptions& options) {
  if (!is_command(command)) throw Error(ErrorKind::ValidationError, "unknown command " + command);
  if (options.depth == 0) throw Error(ErrorKind::ValidationError, "--depth must be at least 1");
  if (options.tol && !(*options.tol > 0.0)) throw Error(ErrorKind::ValidationError, "--tol must be positive");
  Report r;
  r.command = command;
  r.system = spec.name;
  Pipeline p(spec, options, r);
  if (command == "all") {
    for (const auto& name : command_names()) {
      if (name != "all") run_one(name, p);
    }
  } else {
    run_one(command, p);
  }
  r.sort_checks();
  return r;
}

int exit_code(const Report& r) { return r.pass() ? 0 : 1; }

}  // namespace cstar
