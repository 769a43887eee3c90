#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mci/gauss.hpp"
#include "mci/graph.hpp"
#include "mci/heads.hpp"
#include "mci/imset.hpp"
#include "mci/inex.hpp"
#include "mci/io.hpp"
#include "mci/mec.hpp"
#include "mci/separation.hpp"

namespace {

using namespace mci;

std::vector<std::string> split_names(const std::string& list) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(list);
  while (std::getline(ss, field, ',')) {
    std::size_t b = field.find_first_not_of(" \t");
    std::size_t e = field.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(field.substr(b, e - b + 1));
  }
  return out;
}

VSet parse_vertex_set(const Admg& g, const std::string& list) {
  VSet s = 0;
  for (const std::string& name : split_names(list)) s |= bit(g.index_of(name));
  return s;
}

TotalOrder parse_order(const Admg& g, const std::string& list) {
  std::vector<std::string> names = split_names(list);
  if (static_cast<int>(names.size()) != g.p())
    throw ValidationError("--order must list every vertex exactly once");
  VSet seen = 0;
  std::vector<Vertex> seq;
  for (const std::string& name : names) {
    Vertex v = g.index_of(name);
    if (contains(seen, v)) throw ValidationError("--order repeats vertex '" + name + "'");
    seen |= bit(v);
    seq.push_back(v);
  }
  return TotalOrder(std::move(seq));
}

TotalOrder resolve_order(const Admg& g, const std::string& orderList) {
  if (orderList.empty()) return consistent_order(g);
  TotalOrder ord = parse_order(g, orderList);
  if (!order_consistent(g, ord))
    throw ValidationError("--order is not a topological order of the graph");
  return ord;
}

std::vector<long> parse_long_list(const std::string& list, const std::string& flag) {
  std::vector<long> out;
  for (const std::string& item : split_names(list)) {
    try {
      std::size_t used = 0;
      long value = std::stol(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(value);
    } catch (const std::exception&) {
      throw ValidationError(flag + ": '" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw ValidationError(flag + " is empty");
  return out;
}

std::string render_set(const std::vector<std::string>& ground, VSet s) {
  return mci::detail::render_subset(ground, s);
}

nlohmann::json set_to_json(const std::vector<std::string>& ground, VSet s) {
  nlohmann::json arr = nlohmann::json::array();
  for (Vertex v : vertices(s)) arr.push_back(ground[v]);
  return arr;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string rational_to_string(const Rational& q) {
  std::string s = std::to_string(q.num);
  if (q.den != 1) s += "/" + std::to_string(q.den);
  return s;
}

std::string certificate_to_csv(const SemiElemCombination& cert,
                               const std::vector<std::string>& ground) {
  std::ostringstream out;
  out << "coefficient,a,b,c\n";
  for (const auto& [t, q] : cert.terms)
    out << rational_to_string(q) << ',' << render_set(ground, t.a) << ','
        << render_set(ground, t.b) << ',' << render_set(ground, t.c) << '\n';
  return out.str();
}

std::string edge_list(const Admg& g) {
  std::string out;
  auto add = [&](const std::string& e) {
    if (!out.empty()) out += ';';
    out += e;
  };
  for (Vertex a = 0; a < g.p(); ++a)
    for (Vertex b : vertices(g.ch_[a])) add(g.names[a] + "->" + g.names[b]);
  for (Vertex a = 0; a < g.p(); ++a)
    for (Vertex b : vertices(g.sib_[a]))
      if (b > a) add(g.names[a] + "<->" + g.names[b]);
  return out;
}

void write_output(const std::string& dir, const std::string& name, const std::string& text) {
  std::filesystem::path p = std::filesystem::path(dir) / name;
  std::filesystem::create_directories(p.parent_path().empty() ? "." : p.parent_path());
  write_file(p.string(), text);
  std::cout << "wrote " << p.string() << '\n';
}

// Reorders sample moments so column i matches graph vertex i.
SampleMoments align_moments(const Admg& g, const DataMatrix& d, bool covariance, long n) {
  if (static_cast<int>(d.names.size()) != g.p())
    throw ValidationError("data has " + std::to_string(d.names.size()) +
                          " columns but the graph has " + std::to_string(g.p()) + " vertices");
  std::vector<int> col(g.p());
  for (Vertex v = 0; v < g.p(); ++v) {
    bool found = false;
    for (std::size_t j = 0; j < d.names.size(); ++j)
      if (d.names[j] == g.names[v]) {
        col[v] = static_cast<int>(j);
        found = true;
        break;
      }
    if (!found) throw ValidationError("data column for vertex '" + g.names[v] + "' not found");
  }
  if (covariance) {
    Eigen::MatrixXd s(g.p(), g.p());
    for (Vertex a = 0; a < g.p(); ++a)
      for (Vertex b = 0; b < g.p(); ++b) s(a, b) = d.x(col[a], col[b]);
    return moments_from_covariance(s, n);
  }
  Eigen::MatrixXd x(d.x.rows(), g.p());
  for (Vertex v = 0; v < g.p(); ++v) x.col(v) = d.x.col(col[v]);
  return moments_from_data(x);
}

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct Options {
  std::string graph;
  std::string data;
  std::string cov;
  std::string order;
  std::string a, bSet, c;
  std::string kind = "m";
  std::string nlist;
  std::string edges;
  std::string out = ".";
  std::string format = "csv";
  long n = 0;
  long reps = 0;
  int p = 0;
  int threads = 1;
  std::uint64_t seed = 0;
  bool nonredundant = false;
  bool mags = false;
  bool json() const { return format == "json"; }
};

int run_msep(const Options& opt) {
  Admg g = load_graph(opt.graph);
  VSet a = parse_vertex_set(g, opt.a);
  VSet b = parse_vertex_set(g, opt.bSet);
  VSet c = parse_vertex_set(g, opt.c);
  if (a == 0 || b == 0) throw ValidationError("--a and --b must be non-empty");
  if ((a & b) || (a & c) || (b & c)) throw ValidationError("--a, --b, --c must be disjoint");
  bool sep = m_separated(g, a, b, c);
  if (opt.json()) {
    nlohmann::json j{{"a", set_to_json(g.names, a)},
                     {"b", set_to_json(g.names, b)},
                     {"c", set_to_json(g.names, c)},
                     {"separated", sep}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << (sep ? "separated" : "connected") << '\n';
  }
  return 0;
}

int run_params(const Options& opt) {
  Admg g = load_graph(opt.graph);
  ParamFamily fam = parameterizing_sets(g);
  if (opt.json()) {
    nlohmann::json heads = nlohmann::json::array();
    for (const HeadTail& ht : fam.headTails)
      heads.push_back({{"head", set_to_json(g.names, ht.head)},
                       {"tail", set_to_json(g.names, ht.tail)}});
    nlohmann::json sets = nlohmann::json::array();
    for (VSet s : fam.sets) sets.push_back(set_to_json(g.names, s));
    nlohmann::json j{{"heads", std::move(heads)}, {"parameterizing_sets", std::move(sets)}};
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::cout << "head,tail\n";
  for (const HeadTail& ht : fam.headTails)
    std::cout << render_set(g.names, ht.head) << ',' << render_set(g.names, ht.tail) << '\n';
  std::cout << "\nparameterizing_set\n";
  for (VSet s : fam.sets) std::cout << render_set(g.names, s) << '\n';
  return 0;
}

int run_imset(const Options& opt) {
  Admg g = load_graph(opt.graph);
  Imset u(g.names);
  if (opt.kind == "m") u = m_imset(g);
  else if (opt.kind == "n") u = n_imset(g);
  else if (opt.kind == "c") u = characteristic_imset(g);
  else throw ValidationError("--kind must be one of m, n, c");
  if (opt.json()) {
    nlohmann::json rows = nlohmann::json::array();
    for (VSet s = 0; s <= u.all(); ++s)
      if (u[s] != 0) rows.push_back({{"subset", set_to_json(g.names, s)}, {"value", u[s]}});
    nlohmann::json j{{"kind", opt.kind}, {"rows", std::move(rows)}};
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::cout << imset_to_csv(u);
  return 0;
}

int run_nie(const Options& opt, bool toFiles) {
  Admg g = load_graph(opt.graph);
  TotalOrder ord = resolve_order(g, opt.order);
  NieResult r = opt.nonredundant ? nie_nonredundant(g, ord) : nie(g, ord);
  std::string inc = imset_to_csv(r.inclusion);
  std::string exc = imset_to_csv(r.exclusion);
  std::string incCert = certificate_to_csv(r.inclusionCert, g.names);
  std::string excCert = certificate_to_csv(r.exclusionCert, g.names);
  if (toFiles) {
    write_output(opt.out, "inclusion.csv", inc);
    write_output(opt.out, "exclusion.csv", exc);
    write_output(opt.out, "inclusion_certificate.csv", incCert);
    write_output(opt.out, "exclusion_certificate.csv", excCert);
    return 0;
  }
  std::cout << "# inclusion\n" << inc << "\n# exclusion\n" << exc << "\n# inclusion certificate\n"
            << incCert << "\n# exclusion certificate\n" << excCert;
  return 0;
}

int run_verify(const Options& opt) {
  Admg g = load_graph(opt.graph);
  TotalOrder ord = resolve_order(g, opt.order);
  VerificationReport rep = verify_decomposition(g, ord);
  if (opt.json()) {
    nlohmann::json j{{"identity", rep.identity},
                     {"certificates", rep.certificates},
                     {"separations", rep.separations},
                     {"local_statements", rep.olmpCovered},
                     {"failures", rep.failures}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "check,pass\n";
    std::cout << "identity," << (rep.identity ? "true" : "false") << '\n';
    std::cout << "certificates," << (rep.certificates ? "true" : "false") << '\n';
    std::cout << "separations," << (rep.separations ? "true" : "false") << '\n';
    std::cout << "local_statements," << (rep.olmpCovered ? "true" : "false") << '\n';
  }
  for (const std::string& f : rep.failures) std::cerr << "failure: " << f << '\n';
  return rep.ok() ? 0 : 1;
}

int run_simulate(const Options& opt) {
  Admg g = load_graph(opt.graph);
  SimulationResult sim = simulate(g, opt.n, opt.seed);
  std::string seedLine = "# seed=" + std::to_string(opt.seed) + "\n";
  write_output(opt.out, "data.csv", seedLine + data_to_csv(g.names, sim.data));
  nlohmann::json model{{"seed", opt.seed},
                       {"vertices", g.names},
                       {"b", matrix_to_json(sim.model.b)},
                       {"omega", matrix_to_json(sim.model.omega)},
                       {"sigma", matrix_to_json(sim.model.sigma)}};
  write_output(opt.out, "model.json", model.dump(2) + "\n");
  write_output(opt.out, "graph.json", serialize_graph_json(g));
  return 0;
}

SampleMoments load_moments(const Admg& g, const Options& opt) {
  if (!opt.data.empty() && !opt.cov.empty())
    throw ValidationError("--data and --cov are mutually exclusive");
  if (!opt.data.empty()) return align_moments(g, parse_data_csv(read_file(opt.data)), false, 0);
  if (opt.cov.empty()) throw ValidationError("one of --data or --cov is required");
  if (opt.n < 1) throw ValidationError("--cov requires --n with a positive sample count");
  return align_moments(g, parse_covariance_csv(read_file(opt.cov)), true, opt.n);
}

int run_score(const Options& opt) {
  Admg g = load_graph(opt.graph);
  SampleMoments moments = load_moments(g, opt);
  TotalOrder ord = resolve_order(g, opt.order);
  ScoreResult r = bic_mf(g, ord, moments);
  if (opt.json()) {
    nlohmann::json j{{"score", r.score},
                     {"loglik", r.loglik},
                     {"dimension", r.dimension},
                     {"penalty", r.penalty}};
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::cout << "score,loglik,dimension,penalty\n";
  std::cout << format_double(r.score) << ',' << format_double(r.loglik) << ',' << r.dimension
            << ',' << format_double(r.penalty) << '\n';
  return 0;
}

int run_rank(const Options& opt) {
  DataMatrix d;
  bool covariance = false;
  if (!opt.data.empty() && !opt.cov.empty())
    throw ValidationError("--data and --cov are mutually exclusive");
  if (!opt.data.empty()) {
    d = parse_data_csv(read_file(opt.data));
  } else if (!opt.cov.empty()) {
    if (opt.n < 1) throw ValidationError("--cov requires --n with a positive sample count");
    d = parse_covariance_csv(read_file(opt.cov));
    covariance = true;
  } else {
    throw ValidationError("one of --data or --cov is required");
  }

  int truthClass = -1;
  Admg truth;
  bool haveTruth = !opt.graph.empty();
  SampleMoments moments;
  if (haveTruth) {
    truth = load_graph(opt.graph);
    moments = align_moments(truth, d, covariance, opt.n);
  } else {
    moments = covariance ? moments_from_covariance(d.x, opt.n) : moments_from_data(d.x);
  }

  int p = static_cast<int>(moments.s.rows());
  MecCatalog catalog = build_mec_catalog(p);
  if (haveTruth) truthClass = catalog.class_of(truth);
  RankReport rep = rank_models(catalog, moments, truthClass, resolve_threads(opt.threads));

  std::ostringstream ranks;
  ranks << "class,representative,score,rank\n";
  for (std::size_t i = 0; i < rep.ranking.size(); ++i) {
    int id = rep.ranking[i];
    ranks << id << ',' << edge_list(catalog.classes[id].representative) << ','
          << format_double(rep.perClassScore[id].score) << ',' << (i + 1) << '\n';
  }
  write_output(opt.out, "ranks.csv", ranks.str());

  std::cout << "key,value\n";
  std::cout << "classes," << catalog.classes.size() << '\n';
  std::cout << "best_class," << rep.ranking.front() << '\n';
  std::cout << "best_score," << format_double(rep.perClassScore[rep.ranking.front()].score)
            << '\n';
  if (haveTruth) std::cout << "rank_of_truth," << rep.rankOfTruth << '\n';
  return 0;
}

int run_experiment(const Options& opt) {
  GeneratorSpec spec;
  if (!opt.graph.empty()) {
    if (!opt.edges.empty()) throw ValidationError("--graph and --edges are mutually exclusive");
    spec = GeneratorSpec::graph(load_graph(opt.graph));
  } else {
    if (opt.edges.empty()) throw ValidationError("one of --graph or --edges is required");
    if (opt.p < 1) throw ValidationError("--edges requires --p");
    std::size_t colon = opt.edges.find(':');
    if (colon == std::string::npos)
      throw ValidationError("--edges expects LO:HI, for example 0:5");
    std::vector<long> lo = parse_long_list(opt.edges.substr(0, colon), "--edges");
    std::vector<long> hi = parse_long_list(opt.edges.substr(colon + 1), "--edges");
    if (lo.size() != 1 || hi.size() != 1)
      throw ValidationError("--edges expects LO:HI, for example 0:5");
    spec = GeneratorSpec::edge_range(opt.p, static_cast<int>(lo[0]), static_cast<int>(hi[0]));
  }
  std::vector<long> nList = parse_long_list(opt.nlist, "--nlist");
  for (long n : nList)
    if (n < 1) throw ValidationError("--nlist entries must be positive");
  if (opt.reps < 1) throw ValidationError("--reps must be positive");

  ExperimentResult res =
      recovery_experiment(spec, nList, opt.reps, opt.seed, resolve_threads(opt.threads));

  std::string seedLine = "# seed=" + std::to_string(opt.seed) + "\n";
  std::ostringstream hist;
  hist << seedLine << "n,bin,count\n";
  for (const ExperimentRow& row : res.rows)
    for (const auto& [rank, count] : row.histogram)
      hist << row.n << ',' << rank << ',' << count << '\n';
  write_output(opt.out, "histogram.csv", hist.str());

  std::ostringstream summary;
  summary << "n,reps,top1,mean_rank,wall_seconds,seed\n";
  for (const ExperimentRow& row : res.rows)
    summary << row.n << ',' << res.reps << ',' << format_double(row.top1) << ','
            << format_double(row.meanRank) << ',' << format_double(row.wallSeconds) << ','
            << res.seed << '\n';
  write_output(opt.out, "summary.csv", summary.str());

  std::cout << "n,top1,mean_rank\n";
  for (const ExperimentRow& row : res.rows)
    std::cout << row.n << ',' << format_double(row.top1) << ',' << format_double(row.meanRank)
              << '\n';
  return 0;
}

int run_enumerate(const Options& opt) {
  MecCatalog catalog = build_mec_catalog(opt.p);
  long mags = 0;
  for (const MecClass& c : catalog.classes) mags += c.members;
  if (opt.json()) {
    nlohmann::json j{{"p", opt.p}, {"classes", catalog.classes.size()}};
    if (opt.mags) j["mags"] = mags;
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  if (opt.mags) {
    std::cout << "kind,count\n";
    std::cout << "classes," << catalog.classes.size() << '\n';
    std::cout << "mags," << mags << '\n';
    return 0;
  }
  std::cout << catalog.classes.size() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"m-connecting imset calculus for acyclic directed mixed graphs"};
  app.require_subcommand(1);
  Options opt;

  auto addFormat = [&](CLI::App* sub) {
    sub->add_option("--format", opt.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  auto addGraph = [&](CLI::App* sub, bool required = true) {
    CLI::Option* o = sub->add_option("--graph", opt.graph, "Graph file (text or JSON)");
    if (required) o->required();
  };
  auto addOrder = [&](CLI::App* sub) {
    sub->add_option("--order", opt.order,
                    "Comma-separated topological order (default: vertex order)");
  };
  auto addMoments = [&](CLI::App* sub) {
    sub->add_option("--data", opt.data, "Data CSV with a header of vertex names");
    sub->add_option("--cov", opt.cov, "Covariance CSV with a header of vertex names");
    sub->add_option("--n", opt.n, "Sample count behind --cov");
  };
  auto addOut = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out, "Output directory (default: current directory)");
  };
  auto addThreads = [&](CLI::App* sub) {
    sub->add_option("--threads", opt.threads, "Scoring threads, 0 = all cores (default 1)");
  };

  CLI::App* msep = app.add_subcommand("msep", "Test m-separation of two vertex sets");
  addGraph(msep);
  msep->add_option("--a", opt.a, "First vertex set, comma-separated")->required();
  msep->add_option("--b", opt.bSet, "Second vertex set, comma-separated")->required();
  msep->add_option("--c", opt.c, "Conditioning set, comma-separated (default empty)");
  addFormat(msep);

  CLI::App* params = app.add_subcommand("params", "Print heads, tails, and parameterizing sets");
  addGraph(params);
  addFormat(params);

  CLI::App* imset = app.add_subcommand("imset", "Print an imset of the graph as CSV");
  addGraph(imset);
  imset->add_option("--kind", opt.kind,
                    "m (parameterizing), n (non-m-connecting), c (characteristic, DAG only)")
      ->check(CLI::IsMember({"m", "n", "c"}));
  addFormat(imset);

  CLI::App* nieCmd = app.add_subcommand(
      "nie", "Decompose the non-m-connecting imset into inclusion and exclusion parts");
  addGraph(nieCmd);
  addOrder(nieCmd);
  nieCmd->add_flag("--nonredundant", opt.nonredundant, "Cancel opposite-list duplicates");
  CLI::Option* nieOut =
      nieCmd->add_option("--out", opt.out, "Write CSVs to this directory instead of stdout");

  CLI::App* verify = app.add_subcommand(
      "verify", "Check the decomposition identity, certificates, and separations (exponential)");
  addGraph(verify);
  addOrder(verify);
  addFormat(verify);

  CLI::App* simulate = app.add_subcommand("simulate", "Draw Gaussian data from a directed MAG");
  addGraph(simulate);
  simulate->add_option("--n", opt.n, "Number of samples")->required();
  simulate->add_option("--seed", opt.seed, "RNG seed")->required();
  addOut(simulate);

  CLI::App* score = app.add_subcommand("score", "Score a graph against data");
  addGraph(score);
  addMoments(score);
  addOrder(score);
  addFormat(score);

  CLI::App* rank = app.add_subcommand(
      "rank", "Score every Markov equivalence class against data and write ranks.csv");
  addGraph(rank, false);
  addMoments(rank);
  addOut(rank);
  addThreads(rank);

  CLI::App* experiment = app.add_subcommand(
      "experiment", "Repeated simulate-and-rank recovery runs; writes histogram and summary");
  addGraph(experiment, false);
  experiment->add_option("--p", opt.p, "Vertex count for --edges generation");
  experiment->add_option("--edges", opt.edges, "Edge-count range LO:HI for random graphs");
  experiment->add_option("--nlist", opt.nlist, "Comma-separated sample sizes")->required();
  experiment->add_option("--reps", opt.reps, "Repetitions per sample size")->required();
  experiment->add_option("--seed", opt.seed, "Root RNG seed")->required();
  addOut(experiment);
  addThreads(experiment);

  CLI::App* enumerate = app.add_subcommand(
      "enumerate", "Count Markov equivalence classes of directed MAGs on p vertices");
  enumerate->add_option("--p", opt.p, "Vertex count (at most 5)")->required();
  enumerate->add_flag("--mags", opt.mags, "Also count the directed MAGs themselves");
  addFormat(enumerate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (msep->parsed()) return run_msep(opt);
    if (params->parsed()) return run_params(opt);
    if (imset->parsed()) return run_imset(opt);
    if (nieCmd->parsed()) return run_nie(opt, nieOut->count() > 0);
    if (verify->parsed()) return run_verify(opt);
    if (simulate->parsed()) return run_simulate(opt);
    if (score->parsed()) return run_score(opt);
    if (rank->parsed()) return run_rank(opt);
    if (experiment->parsed()) return run_experiment(opt);
    if (enumerate->parsed()) return run_enumerate(opt);
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
