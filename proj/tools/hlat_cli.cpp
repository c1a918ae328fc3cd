// hlat_cli: command-line front end for the hlat library.
// Exit codes: 0 success, 1 property violation, 2 input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "json_io.hpp"

using namespace hlat;
using io::json;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;

struct Options {
  long p = 3;
  std::uint64_t seed = 1;
  long trials = 0;
  long precision = kDefaultPrecision;
  std::vector<std::string> json_paths;
  std::string out;
  // subcommand specific
  std::string sizes = "1,1";
  long n = 1;
  std::string diag;
  bool allow_isotropic = false;
  long min_valuation = -3;
  long lo = -3, hi = 3;
};

json read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::vector<json> documents(const Options& o, std::size_t count) {
  if (o.json_paths.size() != count)
    throw InputError("expected " + std::to_string(count) + " --json document(s), got " + std::to_string(o.json_paths.size()));
  std::vector<json> out;
  for (const auto& path : o.json_paths) out.push_back(read_document(path));
  return out;
}

std::vector<long> parse_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stol(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw InputError("bad integer list: " + text);
    }
  }
  if (out.empty()) throw InputError("empty integer list");
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (long v : parse_list(text)) {
    if (v <= 0) throw InputError("block sizes must be positive");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

long trials_or(const Options& o, long fallback) { return o.trials > 0 ? o.trials : fallback; }

// ---------------------------------------------------------------------------

int cmd_corad(const Options& o, json& out) {
  auto d = io::lattice_from_json(documents(o, 1)[0]);
  GramForm f = d.form();
  out = {{"coradical", io::to_json(coradical(f))},
         {"nearly_unimodular", is_nearly_unimodular(f)},
         {"unimodular", f.is_unimodular()}};
  return kOk;
}

int cmd_classify(const Options& o, json& out) {
  auto d = io::lattice_from_json(documents(o, 1)[0]);
  GramForm f = d.form();
  out = {{"rank", f.rank()}, {"epsilon", f.epsilon()}, {"coradical", io::to_json(coradical(f))},
         {"nearly_unimodular", is_nearly_unimodular(f)}};
  if (f.epsilon() == 1 && f.is_nonsingular()) {
    auto rc = rational_class(f);
    out["rational_class"] = io::to_json(rc);
    out["jordan"] = io::to_json(jordan_invariant_oracle(f));
    json lifts = json::array();
    for (const auto& sig : count_nearly_unimodular_classes(f.prime(), rc)) lifts.push_back(io::to_json(sig));
    out["nearly_unimodular_classes"] = std::move(lifts);
  }
  return kOk;
}

int cmd_isom(const Options& o, json& out) {
  auto docs = documents(o, 2);
  auto da = io::lattice_from_json(docs[0]), db = io::lattice_from_json(docs[1]);
  GramForm f = da.form(), g = db.form();
  const long precision = da.precision.value_or(o.precision);
  out = {{"rational_isometric", isometric_rational(f, g)}};
  if (f.epsilon() == -1) {
    out["isometric"] = f.rank() == g.rank() && coradical(f) == coradical(g);
    out["method"] = "elementary_divisors";
  } else if (is_nearly_unimodular(f) && is_nearly_unimodular(g)) {
    bool iso = isometric_integral_nearly_unimodular(f, g);
    out["isometric"] = iso;
    out["method"] = "nearly_unimodular";
    if (iso) {
      QMatrix x = build_isometry_witness(f, g, precision);
      out["witness"] = io::matrix_to_json(x);
      out["witness_precision"] = precision;
      if (min_valuation(x.transpose() * f.gram() * x - g.gram(), f.prime()) < precision) return kViolation;
    }
  } else {
    out["isometric"] = f.rank() == g.rank() && jordan_invariant_oracle(f) == jordan_invariant_oracle(g);
    out["method"] = "jordan_oracle";
  }
  return kOk;
}

int cmd_refine(const Options& o, json& out) {
  auto d = io::lattice_from_json(documents(o, 1)[0]);
  if (d.epsilon != 1) throw InputError("refine handles symmetric forms");
  AmbientForm start = d.basis ? AmbientForm(d.p, d.gram, *d.basis) : AmbientForm::with_default_lattice(d.p, d.gram);
  auto r = refine_to_nearly_unimodular(start);
  QMatrix gram = r.lattice.lattice_gram();
  json trace = json::array();
  bool chain = true;
  for (const auto& s : r.trace) {
    trace.push_back({{"profile", s.profile}, {"colength", s.colength}, {"n", s.n}, {"chain_holds", s.chain_holds}});
    chain = chain && s.chain_holds;
  }
  GramForm before(d.p, 1, start.lattice_gram()), after(d.p, 1, gram);
  bool nu = is_nearly_unimodular(after);
  bool same_class = rational_class(before) == rational_class(after);
  bool bounded = static_cast<long>(r.trace.size()) <= r.initial_colength;
  out = {{"gram", io::matrix_to_json(gram)},
         {"basis", io::matrix_to_json(r.lattice.basis())},
         {"iterations", r.trace.size()},
         {"initial_colength", r.initial_colength},
         {"normalized_start", r.normalized_start},
         {"trace", std::move(trace)},
         {"checks", {{"nearly_unimodular", nu}, {"rational_class_preserved", same_class}, {"iterations_bounded", bounded},
                     {"chain_holds", chain}}}};
  return nu && same_class && bounded && chain ? kOk : kViolation;
}

int cmd_radical_power(const Options& o, json& out) {
  BlockOrder b(Prime(o.p), parse_sizes(o.sizes));
  out = {{"sizes", b.sizes()}, {"n", o.n}, {"bounds", io::bounds_to_json(radical_power(b, o.n).bounds)}};
  return kOk;
}

int cmd_star_check(const Options& o, json& out) {
  auto doc = documents(o, 1)[0];
  TiledOrder a(io::bounds_from_json(io::require(doc, "order"), "order"));
  long n = doc.contains("n") ? doc["n"].get<long>() : o.n;
  auto r = check_star_property(a, ValuationIdeal{io::bounds_from_json(io::require(doc, "L"), "L")}, n);
  out = {{"hereditary", a.is_hereditary()}, {"n", n}, {"premise", r.premise}, {"conclusion", r.conclusion},
         {"holds", r.holds()}};
  return kOk;
}

int cmd_star_scan(const Options& o, json& out) {
  TiledOrder a = o.json_paths.empty()
                     ? BlockOrder(Prime(o.p), parse_sizes(o.sizes)).tiled()
                     : TiledOrder(io::bounds_from_json(io::require(documents(o, 1)[0], "order"), "order"));
  auto s = scan_star_property(a, o.n, o.lo, o.hi);
  out = {{"hereditary", a.is_hereditary()}, {"n", o.n}, {"lattices", s.lattices}, {"premises", s.premises},
         {"violations", s.violations}};
  if (s.first_violation) out["first_violation"] = io::bounds_to_json(s.first_violation->bounds);
  return kOk;
}

int cmd_unitary_count(const Options& o, json& out) {
  auto a = residue_unitary_enumerate(o.p, ResidueInvolution::swap_offdiagonal);
  auto b = residue_unitary_enumerate(o.p, ResidueInvolution::swap_diagonal);
  out = {{"p", o.p},
         {"swap_offdiagonal", {{"identity_component", a.identity_component}, {"total", a.total}}},
         {"swap_diagonal", {{"identity_component", b.identity_component}, {"total", b.total}}}};
  return kOk;
}

int cmd_descent(const Options& o, json& out) {
  GramForm f = [&] {
    if (!o.diag.empty()) {
      std::vector<Rational> entries;
      for (long v : parse_list(o.diag)) entries.emplace_back(v);
      return GramForm::diagonal(Prime(o.p), entries);
    }
    return io::lattice_from_json(documents(o, 1)[0]).form();
  }();
  TransferContext ctx(f);
  auto rep = descent_experiment(ctx, trials_or(o, 200), o.seed, o.allow_isotropic, o.min_valuation);
  json log = json::array();
  for (std::size_t i = 0; i < rep.log.size() && i < 20; ++i) log.push_back(rep.log[i]);
  out = {{"p", f.prime().value()},
         {"blocks", ctx.order().sizes()},
         {"anisotropic", rep.anisotropic},
         {"trials", rep.trials},
         {"integral_witnesses", rep.integral_witness_count},
         {"symmetric_unit_failures", rep.symmetric_unit_failures},
         {"shift_law_violations", rep.shift_law_violations},
         {"column_sum_cancellations", rep.column_sum_cancellations},
         {"clean", rep.clean()},
         {"log", std::move(log)}};
  // the isotropic control is expected to be unclean
  return rep.clean() || !rep.anisotropic ? kOk : kViolation;
}

json ring_element_to_json(const GroupRingElement& x) {
  json out = json::array();
  for (const auto& c : x.coeff) out.push_back(io::to_json(c));
  return out;
}

int cmd_gamma(const Options& o, json& out) {
  if (o.json_paths.size() == 2) {
    auto docs = documents(o, 2);
    auto a = io::gamma_from_json(docs[0]), b = io::gamma_from_json(docs[1]);
    auto v = gamma_isometric_split_abelian(a, b);
    out = {{"isometric", v.isometric()},
           {"lattice_modules", v.lattice_modules},
           {"coradical_modules", v.coradical_modules},
           {"rational", v.rational}};
    return kOk;
  }
  auto l = io::gamma_from_json(documents(o, 1)[0]);
  auto h = hermitianize(l);
  json table = json::array();
  bool round_trip = true;
  for (std::size_t i = 0; i < l.rank(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < l.rank(); ++j) {
      row.push_back(ring_element_to_json(h[i][j]));
      round_trip = round_trip && trace_T(l.group(), h[i][j]) == l.gram()(i, j);
    }
    table.push_back(std::move(row));
  }
  out = {{"order", l.group().order()}, {"rank", l.rank()}, {"hermitian", std::move(table)}, {"trace_round_trip", round_trip}};
  if (is_nearly_unimodular(l.form())) {
    auto c = corad_with_action(l);
    out["coradical"] = io::to_json(c.profile);
    json act = json::array();
    for (const auto& m : c.module.action) act.push_back(io::matrix_to_json(m));
    out["coradical_action"] = std::move(act);
  }
  return round_trip ? kOk : kViolation;
}

// ---------------------------------------------------------------------------
// Golden facts for ⟨1,9⟩ and friends at p = 3

json golden_facts() {
  const Prime p(3);
  auto form = [&](std::initializer_list<long> d) { return GramForm::diagonal(p, d); };
  json facts = json::array();
  auto record = [&](const char* name, bool ok) { facts.push_back({{"fact", name}, {"holds", ok}}); };

  GramForm a = form({1, 9}), b = form({2, 18});
  record("rational classes of <1,9> and <2,18> agree, Jordan invariants differ",
         rational_class(a) == rational_class(b) && jordan_invariant_oracle(a) != jordan_invariant_oracle(b));
  QMatrix t{{1, 3}, {make_rational(1, 3), -1}};
  record("T^t diag(1,9) T = diag(2,18)", t.transpose() * a.gram() * t == b.gram());
  record("coradical of <1,9> is {2}", coradical(a) == CoradicalProfile{{2}, 0});
  GramForm c = form({1, 1, 9}), d = form({1, 2, 18});
  record("<1,1,9> and <1,2,18> rationally isometric, integrally distinct",
         isometric_rational(c, d) && jordan_invariant_oracle(c) != jordan_invariant_oracle(d));
  GramForm e = form({1, 1, -1}), g = form({1, 3, -3});
  record("<1,1,-1> and <1,3,-3> nearly unimodular, rationally isometric, integrally distinct",
         is_nearly_unimodular(e) && is_nearly_unimodular(g) && isometric_rational(e, g) &&
             !isometric_integral_nearly_unimodular(e, g));
  return facts;
}

int cmd_golden(const Options&, json& out) {
  json facts = golden_facts();
  bool all = std::all_of(facts.begin(), facts.end(), [](const json& f) { return f["holds"].get<bool>(); });
  out = {{"facts", std::move(facts)}, {"all_hold", all}};
  return all ? kOk : kViolation;
}

// ---------------------------------------------------------------------------

int cmd_selftest(const Options& o, json& out) {
  const long trials = trials_or(o, 60);
  Rng rng(o.seed);
  json checks = json::object();
  bool ok = true;
  auto note = [&](const char* name, long failures, long runs) {
    checks[name] = {{"runs", runs}, {"failures", failures}};
    ok = ok && failures == 0;
  };

  long bad = 0;
  for (long t = 0; t < trials; ++t) {
    Prime p(t % 3 == 0 ? 3 : t % 3 == 1 ? 5 : 7);
    std::size_t rank = uniform(rng, 1, 6);
    GramForm f = random_nearly_unimodular(rng, p, rank), g = random_nearly_unimodular(rng, p, rank);
    if (isometric_integral_nearly_unimodular(f, g) != (jordan_invariant_oracle(f) == jordan_invariant_oracle(g))) ++bad;
  }
  note("decision_matches_oracle", bad, trials);

  bad = 0;
  for (long t = 0; t < trials; ++t) {
    Prime p(t % 2 ? 3 : 5);
    auto f = random_diagonal_form(rng, p, uniform(rng, 1, 5), 2);
    QMatrix gram = random_gl(rng, p, f.rank()).transpose() * f.gram() * random_gl(rng, p, f.rank());
    gram = make_rational(1, 2) * (gram + gram.transpose());
    if (determinant(gram) == 0) continue;
    AmbientForm start = AmbientForm::with_default_lattice(p, gram);
    auto r = refine_to_nearly_unimodular(start);
    GramForm after(p, 1, r.lattice.lattice_gram());
    if (!is_nearly_unimodular(after) ||
        rational_class(GramForm(p, 1, start.lattice_gram())) != rational_class(after) ||
        static_cast<long>(r.trace.size()) > r.initial_colength)
      ++bad;
  }
  note("refine", bad, trials);

  bad = 0;
  for (auto f : {GramForm::diagonal(Prime(3), {1, 3}), GramForm::diagonal(Prime(5), {1, 2, 5})})
    bad += descent_experiment(TransferContext(f), trials, o.seed).clean() ? 0 : 1;
  note("descent", bad, 2);

  bad = 0;
  const FiniteGroup c2 = FiniteGroup::cyclic(2);
  for (long t = 0; t < trials; ++t) {
    auto l = random_gamma_lattice(rng, Prime(5), c2, uniform(rng, 1, 3));
    if (!gamma_isometric_split_abelian(l, l.twisted(random_gl(rng, Prime(5), l.rank()))).isometric()) ++bad;
  }
  note("twist_detection", bad, trials);

  json facts = golden_facts();
  long golden_bad = std::count_if(facts.begin(), facts.end(), [](const json& f) { return !f["holds"].get<bool>(); });
  note("golden", golden_bad, static_cast<long>(facts.size()));

  out = {{"seed", o.seed}, {"checks", std::move(checks)}, {"ok", ok}};
  return ok ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermitian and quadratic lattices over Z_(p)"};
  app.fallthrough();
  app.require_subcommand(1);
  Options o;
  app.add_option("--p", o.p, "odd prime");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--trials", o.trials, "number of trials for campaign commands");
  app.add_option("--precision", o.precision, "p-adic precision of witnesses");
  app.add_option("--json", o.json_paths, "input document (repeat for two-document commands)");
  app.add_option("--out", o.out, "write the JSON result here instead of stdout");

  using Handler = int (*)(const Options&, json&);
  Handler handler = nullptr;
  auto sub = [&](CLI::App* parent, const char* name, const char* help, Handler h) {
    auto* s = parent->add_subcommand(name, help);
    s->callback([&handler, h] { handler = h; });
    return s;
  };

  sub(&app, "corad", "coradical profile of a form", cmd_corad);
  sub(&app, "classify", "rational class, Jordan invariants and nearly unimodular lifts", cmd_classify);
  sub(&app, "isom", "decide isometry of two forms (two --json documents)", cmd_isom);
  sub(&app, "refine", "refine a lattice to a nearly unimodular one", cmd_refine);
  auto* orders = app.add_subcommand("orders", "hereditary orders");
  orders->require_subcommand(1);
  sub(orders, "radical-power", "bounds of J^n for a block order", cmd_radical_power)
      ->add_option("--sizes", o.sizes, "block sizes, comma separated");
  orders->add_option("--n", o.n, "exponent");
  sub(orders, "star-check", "check the star property for one order/lattice pair", cmd_star_check);
  auto* scan = sub(orders, "star-scan", "scan all two-sided lattices with bounded entries", cmd_star_scan);
  scan->add_option("--sizes", o.sizes, "block sizes, comma separated");
  scan->add_option("--lo", o.lo, "least bound");
  scan->add_option("--hi", o.hi, "largest bound");
  sub(orders, "unitary-count", "residue unitary groups of the 2x2 block order", cmd_unitary_count);

  auto descent_options = [&](CLI::App* s) {
    s->add_option("--diag", o.diag, "diagonal Gram entries, comma separated");
    s->add_flag("--allow-isotropic", o.allow_isotropic, "run as a control on an isotropic residue form");
    s->add_option("--min-valuation", o.min_valuation, "least valuation of the skew generator");
  };
  auto* transfer = app.add_subcommand("transfer", "transfer of forms to symmetric units");
  transfer->require_subcommand(1);
  descent_options(sub(transfer, "descent", "valuation descent campaign", cmd_descent));
  descent_options(sub(&app, "transfer-descent", "same as 'transfer descent'", cmd_descent));
  sub(&app, "gamma", "one Γ-form document: hermitian form; two: isometry decision", cmd_gamma);
  sub(&app, "golden", "check the golden facts at p = 3", cmd_golden);
  sub(&app, "selftest", "short randomized campaigns over every module", cmd_selftest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  json out;
  int code = kOk;
  try {
    code = handler(o, out);
  } catch (const SingularForm& e) {
    std::cerr << "singular form: " << e.what() << '\n';
    return kInputError;
  } catch (const NotNearlyUnimodular& e) {
    std::cerr << "not nearly unimodular: " << e.what() << '\n';
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << '\n';
    return kInputError;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::logic_error& e) {
    std::cerr << "internal check failed: " << e.what() << '\n';
    return kViolation;
  }

  const std::string text = out.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out);
    if (!f) {
      std::cerr << "cannot write " << o.out << '\n';
      return kInputError;
    }
    f << text;
  }
  return code;
}
