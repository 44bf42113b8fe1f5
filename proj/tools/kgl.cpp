// kgl: command-line front end for the k-graph toolkit.
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kgl/algebra.hpp"
#include "kgl/catalog.hpp"
#include "kgl/error.hpp"
#include "kgl/groupoid.hpp"
#include "kgl/ktheory.hpp"
#include "kgl/skew.hpp"
#include "kgl/structure.hpp"

using namespace kgl;
using json = nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open file", {{"file", path}});
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Report a line/column for the failing byte.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::ParseError, e.what(), {{"file", path}, {"line", line}, {"column", col}});
  }
}

struct GraphSource {
  std::string file;
  std::string example;

  void attach(CLI::App* app) {
    app->add_option("graph", file, "Graph skeleton JSON file");
    app->add_option("--example", example, "Named example graph (see `kgl examples`)");
  }

  KGraph load() const {
    if (!example.empty()) return example_graph(example);
    if (file.empty()) throw CLI::ValidationError("graph", "a graph file or --example is required");
    const json j = read_json(file);
    return KGraph::validate(skeleton_from_json(j.contains("skeleton") ? j.at("skeleton") : j));
  }
};

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

Degree bound_or_default(const std::string& text, int k, std::int64_t fallback) {
  if (text.empty()) return ones(k, fallback);
  Degree d = parse_degree(text);
  if (d.size() == 1 && k > 1) d = ones(k, d[0]);
  if (static_cast<int>(d.size()) != k)
    throw Error(ErrorKind::InvalidArgument, "bound needs one entry per color", {{"k", k}, {"bound", text}});
  return d;
}

Cocycle2 load_cocycle(const std::string& path, const KGraph& g) {
  if (path == "torus") return torus_cocycle(g.rank());
  return Cocycle2::from_json(read_json(path), g);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kgl: computations for finite higher-rank graphs and their twisted algebras"};
  app.require_subcommand(1);

  // validate
  GraphSource validate_src;
  auto* validate = app.add_subcommand("validate", "Check a skeleton and report its shape");
  validate_src.attach(validate);

  // analyze
  GraphSource analyze_src;
  std::string analyze_bound;
  int cofinality_bound = 16;
  bool real_cocycle = false;
  auto* analyze = app.add_subcommand("analyze", "Aperiodicity, cofinality and generalised-cycle report");
  analyze_src.attach(analyze);
  analyze->add_option("--bound", analyze_bound, "Degree bound d1,d2,... (a single value applies to all colors)");
  analyze->add_option("--cofinality-bound", cofinality_bound, "Iteration bound for the cofinality check");
  analyze->add_flag("--real", real_cocycle, "Include the statement for real-valued twists");

  // ktheory
  GraphSource kt_src;
  std::string twist_file, t_text, character_file;
  bool af_route = false;
  auto* ktheory = app.add_subcommand("ktheory", "K-groups with vertex and unit classes");
  kt_src.attach(ktheory);
  ktheory->add_option("--twist", twist_file, "Cocycle JSON (or 'torus')");
  ktheory->add_option("--t", t_text, "Rational exponent p/q for a real cocycle");
  ktheory->add_option("--character", character_file, "Character JSON applied to the twist");
  ktheory->add_flag("--af", af_route, "Use the degree-coboundary AF route");

  // algebra-eval
  GraphSource alg_src;
  std::string x_file, y_file, alg_cocycle, op = "star", level_text, chi_file;
  auto* algebra = app.add_subcommand("algebra-eval", "Evaluate an operation on spanning-term combinations");
  alg_src.attach(algebra);
  algebra->add_option("--x", x_file, "Left element JSON")->required();
  algebra->add_option("--y", y_file, "Right element JSON");
  algebra->add_option("--cocycle", alg_cocycle, "Cocycle JSON (or 'torus'); default trivial");
  algebra->add_option("--op", op, "star | involution | expand | equals | specialize | groupoid")
      ->check(CLI::IsMember({"star", "involution", "expand", "equals", "specialize", "groupoid"}));
  algebra->add_option("--level", level_text, "Level for expand");
  algebra->add_option("--character", chi_file, "Character JSON for specialize/groupoid");

  // field-probe
  GraphSource fp_src;
  int fp_terms = 20, fp_depth = 2;
  unsigned fp_seed = 1;
  auto* field = app.add_subcommand("field-probe", "Continuity of S_a(c) along torus twists 2^-n -> 0 (CSV)");
  fp_src.attach(field);
  field->add_option("--steps", fp_terms, "Number of twists n = 1..steps");
  field->add_option("--depth", fp_depth, "Truncation depth");
  field->add_option("--seed", fp_seed, "Seed for the random coefficients and vector");

  // skew
  GraphSource skew_src;
  std::string window_text;
  auto* skew = app.add_subcommand("skew", "Finite window of the skew product by the degree map");
  skew_src.attach(skew);
  skew->add_option("--window", window_text, "Box a1:b1,a2:b2,...")->required();

  // examples
  auto* examples = app.add_subcommand("examples", "List the built-in example graphs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) {
      const KGraph g = validate_src.load();
      emit({{"valid", true},
            {"k", g.rank()},
            {"vertices", g.num_vertices()},
            {"edges", g.num_edges()},
            {"squares", g.skeleton().squares.size()},
            {"no_sources", g.has_no_sources()},
            {"skeleton", skeleton_to_json(g.skeleton())}});
    } else if (analyze->parsed()) {
      const KGraph g = analyze_src.load();
      KirchbergBounds b;
      b.pair_bound = bound_or_default(analyze_bound, g.rank(), 2);
      b.cofinality_bound = cofinality_bound;
      emit(kirchberg_report(g, b, real_cocycle).to_json(g));
    } else if (ktheory->parsed()) {
      const KGraph g = kt_src.load();
      TwistSpec spec = TwistSpec::untwisted();
      if (af_route) {
        spec = TwistSpec::degree_coboundary(twist_file.empty() ? Cocycle2::zero(ValueGroup::trivial(), g.rank())
                                                               : load_cocycle(twist_file, g));
      } else if (!twist_file.empty()) {
        Cocycle2 c = load_cocycle(twist_file, g);
        if (!character_file.empty())
          spec = TwistSpec::via_character(c, Character::from_json(read_json(character_file)));
        else if (c.group().is_circle())
          spec = TwistSpec::circle(c);
        else
          spec = TwistSpec::exponential(c, t_text.empty() ? mpq_class(1) : parse_rational(t_text));
      }
      emit(twisted_ktheory_reduce(g, spec).to_json(g));
    } else if (algebra->parsed()) {
      const KGraph g = alg_src.load();
      const Cocycle2 c = alg_cocycle.empty() ? Cocycle2::zero(ValueGroup::trivial(), g.rank()) : load_cocycle(alg_cocycle, g);
      const ValueGroup grp = algebra_group(c.group());
      const AlgebraElement x = AlgebraElement::from_json(read_json(x_file), g, grp);
      auto need_y = [&]() {
        if (y_file.empty()) throw CLI::ValidationError("--y", "this operation needs --y");
        return AlgebraElement::from_json(read_json(y_file), g, grp);
      };
      auto need_chi = [&]() {
        if (chi_file.empty()) return Character::evaluation();
        return Character::from_json(read_json(chi_file));
      };
      if (op == "star") {
        emit(star_product(g, x, need_y(), c).to_json(g));
      } else if (op == "involution") {
        emit(involution(x).to_json(g));
      } else if (op == "expand") {
        emit(expand_to_level(g, x, c, bound_or_default(level_text, g.rank(), 1)).to_json(g));
      } else if (op == "equals") {
        emit({{"equal", equals(g, x, need_y(), c)}});
      } else if (op == "specialize") {
        emit(specialize(x, need_chi()).to_json(g));
      } else {
        const Character chi = need_chi();
        const Cocycle2 circ = c.group().is_circle() ? c : character_apply(c, chi);
        emit({{"combination", combination_to_json(g, to_groupoid(g, specialize(x, chi), circ))}});
      }
    } else if (field->parsed()) {
      const KGraph g = fp_src.load();
      if (g.rank() < 2) throw Error(ErrorKind::UnsupportedRank, "torus twists need k >= 2", {{"k", g.rank()}});
      std::mt19937_64 rng(fp_seed);
      std::uniform_int_distribution<int> coef(-3, 3);
      const std::vector<Path> small = g.paths_below(ones(g.rank(), 1));
      PairCoefficients a;
      for (const Path& l : small)
        for (const Path& r : small)
          if (l.source == r.source && coef(rng) > 1) a[{l, r}] = Scalar::gaussian(coef(rng), coef(rng));
      IndicatorCombination x;
      const std::vector<Path> deep = g.paths_below(ones(g.rank(), fp_depth));
      for (const Path& p : deep)
        for (const Path& q : deep)
          if (p.source == q.source && coef(rng) > 1) add_term(x, BasicSet{p, q}, Scalar::gaussian(coef(rng), coef(rng)));
      const Cocycle2 base = torus_cocycle(g.rank());
      std::vector<Cocycle2> seq;
      std::vector<double> params;
      for (int n = 1; n <= fp_terms; ++n) {
        std::vector<mpq_class> turns(static_cast<std::size_t>(base.group().rank), mpq_class(1, 1));
        for (auto& t : turns) t = mpq_class(mpz_class(1), mpz_class(1) << n);
        seq.push_back(character_apply(base, Character::torus(turns)));
        params.push_back(std::ldexp(1.0, -n));
      }
      const Cocycle2 lim = Cocycle2::zero(ValueGroup::circle_turns(), g.rank());
      const ContinuityReport rep = continuity_probe(g, a, seq, params, lim, x, fp_depth);
      std::cout << "n,parameter,diff_norm,lsc_ok\n";
      std::cout.precision(17);
      for (const auto& row : rep.rows)
        std::cout << row.n << "," << row.parameter << "," << row.diff_norm << "," << (row.lsc_ok ? "true" : "false") << "\n";
    } else if (skew->parsed()) {
      const KGraph g = skew_src.load();
      const SkewWindow w = build_window(g, parse_box(window_text));
      json out;
      out["window"] = box_to_string(w.box);
      out["skeleton"] = skeleton_to_json(w.graph.skeleton());
      auto b0 = degree_coboundary_solve(w.graph);
      out["degree_coboundary"] = b0 ? json(*b0) : json(nullptr);
      if (b0) {
        std::int64_t top = 0;
        for (const Degree& d : *b0)
          for (auto v : d) top = std::max(top, v);
        std::vector<Degree> stages;
        for (std::int64_t j = 0; j <= top; ++j) stages.push_back(ones(g.rank(), j));
        const AfReport rep = af_stages(w.graph, Cocycle2::zero(ValueGroup::trivial(), g.rank()), stages);
        out["af"] = rep.to_json(w.graph);
        out["descriptor"] = af_limit_descriptor(rep).to_json();
      }
      emit(out);
    } else if (examples->parsed()) {
      json list = json::array();
      for (const std::string& name : catalog_names()) {
        const KGraph g = example_graph(name);
        list.push_back({{"name", name}, {"k", g.rank()}, {"vertices", g.num_vertices()}, {"edges", g.num_edges()}});
      }
      emit(list);
    }
  } catch (const Error& e) {
    emit(e.to_json());
    return 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}
