#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gqlcore/automaton.hpp"
#include "gqlcore/core.hpp"
#include "gqlcore/datalog.hpp"
#include "gqlcore/experiments.hpp"
#include "gqlcore/graph.hpp"
#include "gqlcore/lcra.hpp"
#include "gqlcore/match_oracle.hpp"
#include "gqlcore/pattern_text.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitEval = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw gqlcore::EvalError("cannot write file: " + path);
  out << content;
}

nlohmann::json relation_json(const gqlcore::Relation& rel, const gqlcore::ValueRenderer& render) {
  nlohmann::json doc;
  doc["attrs"] = nlohmann::json::array();
  for (const auto& a : rel.attrs) doc["attrs"].push_back(a);
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : rel.rows) {
    nlohmann::json r = nlohmann::json::object();
    for (const auto& [k, v] : row) r[k] = render(v);
    doc["rows"].push_back(r);
  }
  return doc;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::pair<int, int> parse_range(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos) throw gqlcore::ParseError("range must look like 4..30");
  return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"core property-graph query engine: pattern matching, RA/LCRA, datalog, benchmarks"};
  app.require_subcommand(1);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a query file against a graph");
  std::string eval_graph, eval_query, eval_format = "csv";
  eval_cmd->add_option("--graph", eval_graph, "graph JSON file")->required();
  eval_cmd->add_option("--query", eval_query, "query file")->required();
  eval_cmd->add_option("--format", eval_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  // pattern
  auto* pat_cmd = app.add_subcommand("pattern", "parse and analyze a pattern");
  std::string pat_text;
  bool pat_free_vars = false, pat_one_way = false, pat_pnf = false, pat_pnf_dataless = false,
       pat_automaton = false;
  pat_cmd->add_option("--text", pat_text, "pattern text")->required();
  pat_cmd->add_flag("--free-vars", pat_free_vars, "print the free variable set");
  pat_cmd->add_flag("--one-way", pat_one_way, "check the one-way restriction");
  pat_cmd->add_flag("--pnf", pat_pnf, "print the +-normal form");
  pat_cmd->add_flag("--pnf-dataless", pat_pnf_dataless, "+-normal form, dataless mode");
  pat_cmd->add_flag("--automaton", pat_automaton, "print the orientation-word automaton");

  // translate
  auto* tr_cmd = app.add_subcommand("translate", "translate a query body between ra and lcra");
  std::string tr_from, tr_to, tr_query, tr_graph;
  bool tr_check = false;
  tr_cmd->add_option("--from", tr_from, "ra or lcra")->required()
      ->check(CLI::IsMember({"ra", "lcra"}));
  tr_cmd->add_option("--to", tr_to, "ra or lcra")->required()
      ->check(CLI::IsMember({"ra", "lcra"}));
  tr_cmd->add_option("--query", tr_query, "query file")->required();
  tr_cmd->add_option("--graph", tr_graph, "graph for --check");
  tr_cmd->add_flag("--check", tr_check, "evaluate both forms and compare");

  // datalog
  auto* dl_cmd = app.add_subcommand("datalog", "run a datalog program on a graph");
  std::string dl_graph, dl_program;
  dl_cmd->add_option("--graph", dl_graph, "graph JSON file")->required();
  dl_cmd->add_option("--program", dl_program, "program file")->required();

  // experiment
  auto* ex_cmd = app.add_subcommand("experiment", "timeout experiment on G(n,p)");
  std::string ex_n_range = "4..30", ex_p = "0.1,0.2,0.3,0.4,0.5", ex_out;
  int ex_graphs = 10, ex_step = 1, ex_warmups = 1, ex_min_len = 2;
  double ex_timeout = 10.0;
  std::uint64_t ex_seed = 0;
  bool ex_stop_infinite = false;
  ex_cmd->add_option("--n-range", ex_n_range, "node counts, e.g. 4..30");
  ex_cmd->add_option("--n-step", ex_step, "stride through the n range");
  ex_cmd->add_option("--p", ex_p, "comma-separated edge probabilities");
  ex_cmd->add_option("--graphs", ex_graphs, "graphs per grid point");
  ex_cmd->add_option("--timeout-secs", ex_timeout, "per-run timeout");
  ex_cmd->add_option("--seed", ex_seed, "experiment seed");
  ex_cmd->add_option("--warmups", ex_warmups, "warm-up runs per graph");
  ex_cmd->add_option("--min-len", ex_min_len, "minimum trail length");
  ex_cmd->add_option("--out", ex_out, "CSV output file")->required();
  ex_cmd->add_flag("--stop-after-infinite", ex_stop_infinite,
                   "per p, stop raising n after the first ∞ point");

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "generate a graph family instance");
  std::string gen_kind, gen_out, gen_value_key = "val";
  int gen_n = 0;
  double gen_p = 0.0;
  std::uint64_t gen_seed = 0;
  std::int64_t gen_vmin = 0, gen_vmax = 100;
  gen_cmd->add_option("--kind", gen_kind, "gnp | dataless-path | annotated-path | node-annotated-path")
      ->required()
      ->check(CLI::IsMember({"gnp", "dataless-path", "annotated-path", "node-annotated-path"}));
  gen_cmd->add_option("--n", gen_n, "size parameter")->required();
  gen_cmd->add_option("--p", gen_p, "edge probability (gnp)");
  gen_cmd->add_option("--seed", gen_seed, "generator seed");
  gen_cmd->add_option("--value-key", gen_value_key, "property key for values");
  gen_cmd->add_option("--value-min", gen_vmin, "value range lower bound");
  gen_cmd->add_option("--value-max", gen_vmax, "value range upper bound");
  gen_cmd->add_option("--out", gen_out, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (eval_cmd->parsed()) {
      auto g = gqlcore::load_graph(slurp(eval_graph));
      auto qf = gqlcore::parse_core_query(slurp(eval_query));
      auto rel = gqlcore::eval_core(g, qf);
      if (eval_format == "json")
        std::cout << relation_json(rel, g.renderer()).dump(2) << "\n";
      else
        std::cout << gqlcore::to_csv(rel, g.renderer());
      std::cerr << "-- " << rel.rows.size() << " row(s), "
                << (gqlcore::check_boolean(rel) ? "nonempty" : "empty") << "\n";
      return kExitOk;
    }

    if (pat_cmd->parsed()) {
      auto p = gqlcore::parse_pattern(pat_text);
      std::cout << "pattern: " << gqlcore::print_pattern(*p) << "\n";
      if (pat_free_vars) {
        std::cout << "free-vars:";
        for (const auto& v : gqlcore::free_vars(*p)) std::cout << " " << v;
        std::cout << "\n";
      }
      if (pat_one_way) {
        std::vector<gqlcore::OneWayViolation> violations;
        bool ok = gqlcore::is_one_way(*p, &violations);
        std::cout << "one-way: " << (ok ? "yes" : "no") << "\n";
        for (const auto& v : violations)
          std::cout << "  violation: " << v.reason << " in " << v.subterm << "\n";
      }
      if (pat_pnf || pat_pnf_dataless) {
        auto nf = gqlcore::plus_normal_form(*p, pat_pnf_dataless);
        std::cout << "pnf: " << gqlcore::print_pattern(*nf) << "\n";
      }
      if (pat_automaton) {
        auto nfa = gqlcore::pattern_to_automaton(*p);
        std::cout << "automaton: " << nfa.state_count() << " states, initial " << nfa.initial
                  << ", final " << nfa.final_state << "\n";
        for (int s = 0; s < nfa.state_count(); ++s)
          for (const auto& t : nfa.delta[s])
            std::cout << "  " << s << " -" << (t.symbol ? std::string(1, t.symbol) : "eps")
                      << "-> " << t.to << "\n";
      }
      return kExitOk;
    }

    if (tr_cmd->parsed()) {
      if (tr_from == tr_to) throw gqlcore::ParseError("--from and --to must differ");
      auto qf = gqlcore::parse_core_query(slurp(tr_query));
      gqlcore::RASchema schema;
      for (const auto& rel : qf.rels) schema.emplace(rel.name, rel.attrs());
      gqlcore::CoreQueryFile out = qf;
      if (tr_from == "ra") {
        if (!qf.is_pgq) throw gqlcore::ParseError("query file does not hold a pgq (ra) body");
        out.is_pgq = false;
        out.lcra = gqlcore::ra_to_lcra(*qf.ra);
        out.ra = nullptr;
      } else {
        if (qf.is_pgq) throw gqlcore::ParseError("query file does not hold a gql (lcra) body");
        out.is_pgq = true;
        out.ra = gqlcore::lcra_to_ra(*qf.lcra, schema);
        out.lcra = nullptr;
      }
      std::cout << gqlcore::print_core_query(out);
      if (tr_check) {
        if (tr_graph.empty())
          throw gqlcore::ParseError("--check requires --graph");
        auto g = gqlcore::load_graph(slurp(tr_graph));
        auto before = gqlcore::eval_core(g, qf);
        auto after = gqlcore::eval_core(g, out);
        if (!(before == after)) {
          std::cerr << "-- check FAILED: translated query evaluates differently\n";
          return kExitEval;
        }
        std::cerr << "-- check ok: both forms evaluate identically\n";
      }
      return kExitOk;
    }

    if (dl_cmd->parsed()) {
      auto g = gqlcore::load_graph(slurp(dl_graph));
      auto prog = gqlcore::parse_datalog(slurp(dl_program));
      if (prog.out.empty()) throw gqlcore::ParseError("program has no .out directive");
      auto db = gqlcore::encode_graph(g);
      auto res = gqlcore::eval_datalog(db, prog);
      auto it = res.idb.find(prog.out);
      if (it == res.idb.end())
        throw gqlcore::ParseError("no rule defines output predicate " + prog.out);
      std::size_t arity = 0;
      for (const auto& rule : prog.rules)
        if (rule.head.pred == prog.out) arity = rule.head.args.size();
      if (arity == 0) {
        std::cout << (res.boolean ? "true" : "false") << "\n";
      } else {
        auto render = g.renderer();
        std::vector<std::string> lines;
        for (const auto& tuple : it->second) {
          std::string line;
          for (std::size_t i = 0; i < tuple.size(); ++i) {
            if (i) line += ',';
            line += gqlcore::csv_escape(render(tuple[i]));
          }
          lines.push_back(std::move(line));
        }
        std::sort(lines.begin(), lines.end());
        for (const auto& l : lines) std::cout << l << "\n";
      }
      return kExitOk;
    }

    if (ex_cmd->parsed()) {
      auto [n_lo, n_hi] = parse_range(ex_n_range);
      gqlcore::TrialConfig cfg;
      cfg.graphs_per_point = ex_graphs;
      cfg.timeout_secs = ex_timeout;
      cfg.min_path_len = ex_min_len;
      cfg.seed = ex_seed;
      cfg.warmups = ex_warmups;
      gqlcore::ExperimentResult result;
      for (double p : parse_doubles(ex_p)) {
        for (int n = n_lo; n <= n_hi; n += ex_step) {
          auto pt = gqlcore::run_point(n, p, cfg);
          bool infinite = !pt.median_ms.has_value();
          std::cerr << "n=" << pt.n << " p=" << pt.p << " timeouts=" << pt.timeout_fraction
                    << " median=" << (infinite ? std::string("inf")
                                               : std::to_string(*pt.median_ms) + "ms")
                    << "\n";
          result.points.push_back(std::move(pt));
          if (ex_stop_infinite && infinite) break;
        }
      }
      spit(ex_out, gqlcore::experiment_csv(result));
      std::cerr << "-- wrote " << ex_out << "\n";
      return kExitOk;
    }

    if (gen_cmd->parsed()) {
      gqlcore::GraphFamilySpec spec;
      if (gen_kind == "gnp")
        spec.kind = gqlcore::GraphFamily::gnp;
      else if (gen_kind == "dataless-path")
        spec.kind = gqlcore::GraphFamily::dataless_path;
      else if (gen_kind == "annotated-path")
        spec.kind = gqlcore::GraphFamily::annotated_path;
      else
        spec.kind = gqlcore::GraphFamily::node_annotated_path;
      spec.n = gen_n;
      spec.p = gen_p;
      spec.seed = gen_seed;
      spec.value_key = gen_value_key;
      spec.value_min = gen_vmin;
      spec.value_max = gen_vmax;
      spit(gen_out, gqlcore::save_graph(gqlcore::generate(spec)));
      std::cerr << "-- wrote " << gen_out << "\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gqlcore::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gqlcore::PatternError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gqlcore::GraphError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEval;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEval;
  }
  return kExitUsage;
}
