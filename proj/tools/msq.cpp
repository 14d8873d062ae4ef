// msq: build, query and inspect graph similarity indexes.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <map>
#include <optional>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "msq/index.hpp"
#include "msq/synthetic.hpp"

using namespace msq;
using json = nlohmann::ordered_json;

namespace {

enum class Format { kTable, kCsv, kJsonl };

struct Options {
  std::string dataset, index, queries, output;
  std::string tau_list = "0";
  std::int64_t tau = 0;
  std::optional<std::int64_t> l, x0, y0;
  std::optional<std::uint32_t> block, fanout;
  std::uint64_t budget = 10'000'000;
  unsigned threads = 0;
  Format format = Format::kTable;
  SyntheticParams gen;
};

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string join_ids(const std::vector<GraphId>& ids, char sep) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(ids[i]);
  }
  return s;
}

// "3", "1-5", "1..5" or "0,2,4"
std::vector<std::int64_t> parse_tau_range(const std::string& shape) {
  std::vector<std::int64_t> out;
  auto num = [&](const std::string& s) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != s.size() || v < 0) throw CLI::ValidationError("--tau", "bad threshold '" + s + "'");
    return static_cast<std::int64_t>(v);
  };
  std::string range_sep = shape.find("..") != std::string::npos ? ".." : "-";
  if (auto at = shape.find(range_sep); at != std::string::npos && shape.find(',') == std::string::npos) {
    const auto lo = num(shape.substr(0, at));
    const auto hi = num(shape.substr(at + range_sep.size()));
    if (hi < lo) throw CLI::ValidationError("--tau", "empty range " + shape);
    for (auto t = lo; t <= hi; ++t) out.push_back(t);
    return out;
  }
  std::stringstream ss(shape);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(num(part));
  if (out.empty()) throw CLI::ValidationError("--tau", "no threshold given");
  return out;
}

IndexParams index_params(const Options& o) {
  IndexParams p;
  if (o.l) p.l = *o.l;
  if (o.block) p.block = *o.block;
  if (o.fanout) p.fanout = *o.fanout;
  p.x0 = o.x0;
  p.y0 = o.y0;
  return p;
}

void print_kv(const std::vector<std::pair<std::string, std::string>>& rows, Format f) {
  if (f == Format::kJsonl) {
    json j;
    for (const auto& [k, v] : rows) j[k] = v;
    std::cout << j.dump() << "\n";
  } else if (f == Format::kCsv) {
    std::cout << "key,value\n";
    for (const auto& [k, v] : rows) std::cout << k << "," << v << "\n";
  } else {
    std::size_t w = 0;
    for (const auto& r : rows) w = std::max(w, r.first.size());
    for (const auto& [k, v] : rows) std::cout << std::left << std::setw(static_cast<int>(w) + 2) << k << v << "\n";
  }
}

std::vector<std::pair<std::string, std::string>> size_rows(const IndexStats& s) {
  auto avg = [](std::uint64_t bits, std::uint64_t n) { return n ? fixed(double(bits) / n) : "0"; };
  const double plain = static_cast<double>(s.plain.total());
  return {
      {"graphs", std::to_string(s.graphs)},
      {"regions", std::to_string(s.regions)},
      {"tree_nodes", std::to_string(s.nodes)},
      {"vocab_degree", std::to_string(s.vocab_degree)},
      {"vocab_label", std::to_string(s.vocab_label)},
      {"psi_d_entries", std::to_string(s.psi_d_entries)},
      {"psi_l_entries", std::to_string(s.psi_l_entries)},
      {"psi_d_bits_fixed", avg(s.psi_d.fixed_bits, s.psi_d_entries)},
      {"psi_d_bits_gamma", avg(s.psi_d.gamma_bits, s.psi_d_entries)},
      {"psi_d_bits_hybrid", avg(s.psi_d.hybrid_bits, s.psi_d_entries)},
      {"psi_l_bits_fixed", avg(s.psi_l.fixed_bits, s.psi_l_entries)},
      {"psi_l_bits_gamma", avg(s.psi_l.gamma_bits, s.psi_l_entries)},
      {"psi_l_bits_hybrid", avg(s.psi_l.hybrid_bits, s.psi_l_entries)},
      {"B_D_bits", std::to_string(s.space_d.b + s.space_d.b_rank)},
      {"S_D_bits", std::to_string(s.space_d.s)},
      {"SB_D_bits", std::to_string(s.space_d.sb)},
      {"flag_D_bits", std::to_string(s.space_d.flag)},
      {"words_D_bits", std::to_string(s.space_d.words)},
      {"B_L_bits", std::to_string(s.space_l.b + s.space_l.b_rank)},
      {"S_L_bits", std::to_string(s.space_l.s)},
      {"SB_L_bits", std::to_string(s.space_l.sb)},
      {"flag_L_bits", std::to_string(s.space_l.flag)},
      {"words_L_bits", std::to_string(s.space_l.words)},
      {"succinct_nodes_bytes", std::to_string(s.succinct.nodes)},
      {"succinct_degree_bytes", std::to_string(s.succinct.degree)},
      {"succinct_label_bytes", std::to_string(s.succinct.label)},
      {"succinct_total_bytes", std::to_string(s.succinct.total())},
      {"plain_nodes_bytes", std::to_string(s.plain.nodes)},
      {"plain_degree_bytes", std::to_string(s.plain.degree)},
      {"plain_label_bytes", std::to_string(s.plain.label)},
      {"plain_total_bytes", std::to_string(s.plain.total())},
      {"succinct_over_plain", plain > 0 ? fixed(double(s.succinct.total()) / plain, 4) : "0"},
  };
}

int cmd_generate(const Options& o) {
  const auto ds = generate_synthetic(o.gen);
  std::ofstream out(o.output);
  if (!out) throw std::runtime_error("cannot open for writing: " + o.output);
  write_dataset(out, ds.graphs, ds.labels);
  std::cerr << "wrote " << ds.graphs.size() << " graphs to " << o.output << "\n";
  return 0;
}

int cmd_build(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  LabelTables tables;
  auto graphs = parse_dataset_file(o.dataset, tables);
  if (graphs.empty()) throw std::runtime_error("dataset contains no graphs: " + o.dataset);
  const MsqIndex index = build_index(std::move(graphs), std::move(tables), index_params(o));
  const double build_ms = ms_since(t0);
  const auto bytes = serialize_index(index);
  save_index(index, o.index);
  const auto st = index_stats(index);
  std::vector<std::pair<std::string, std::string>> rows = {
      {"graphs", std::to_string(st.graphs)},
      {"regions", std::to_string(st.regions)},
      {"vocab_degree", std::to_string(st.vocab_degree)},
      {"vocab_label", std::to_string(st.vocab_label)},
      {"S_a_prime_bytes", std::to_string(st.succinct.nodes)},
      {"S_b_prime_bytes", std::to_string(st.succinct.degree)},
      {"S_c_prime_bytes", std::to_string(st.succinct.label)},
      {"file_bytes", std::to_string(bytes.size())},
      {"build_ms", fixed(build_ms, 1)},
  };
  print_kv(rows, o.format);
  return 0;
}

int cmd_stats(const Options& o) {
  const MsqIndex index = load_index(o.index);
  auto rows = size_rows(index_stats(index));
  const auto& p = index.partition();
  rows.insert(rows.begin() + 2, {{"x0", std::to_string(p.x0)},
                                 {"y0", std::to_string(p.y0)},
                                 {"l", std::to_string(p.l)},
                                 {"block", std::to_string(index.block())},
                                 {"fanout", std::to_string(index.fanout())}});
  print_kv(rows, o.format);
  return 0;
}

int cmd_query(const Options& o) {
  const MsqIndex index = load_index(o.index);
  const auto queries = parse_queries_file(index, o.queries);
  QueryOptions qo{o.tau, o.budget, o.threads};
  if (o.format == Format::kCsv) std::cout << "query,tau,candidates,answers,unverified,filter_ms,verify_ms,answer_ids\n";
  if (o.format == Format::kTable)
    std::cout << std::left << std::setw(7) << "query" << std::setw(5) << "tau" << std::setw(12)
              << "candidates" << std::setw(9) << "answers" << std::setw(12) << "unverified"
              << std::setw(11) << "filter_ms" << std::setw(11) << "verify_ms" << "answer_ids\n";
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto r = query(index, queries[i], qo);
    switch (o.format) {
      case Format::kCsv:
        std::cout << i << "," << o.tau << "," << r.candidates.size() << "," << r.answers.size() << ","
                  << r.unverified.size() << "," << fixed(r.filter_ms) << "," << fixed(r.verify_ms)
                  << "," << join_ids(r.answers, ' ') << "\n";
        break;
      case Format::kJsonl: {
        json j;
        j["query"] = i;
        j["tau"] = o.tau;
        j["candidates"] = r.candidates.size();
        j["answers"] = r.answers;
        j["unverified"] = r.unverified;
        j["filter_ms"] = r.filter_ms;
        j["verify_ms"] = r.verify_ms;
        std::cout << j.dump() << "\n";
        break;
      }
      case Format::kTable:
        std::cout << std::left << std::setw(7) << i << std::setw(5) << o.tau << std::setw(12)
                  << r.candidates.size() << std::setw(9) << r.answers.size() << std::setw(12)
                  << r.unverified.size() << std::setw(11) << fixed(r.filter_ms) << std::setw(11)
                  << fixed(r.verify_ms) << join_ids(r.answers, ' ') << "\n";
        break;
    }
  }
  return 0;
}

int cmd_bench(const Options& o) {
  const MsqIndex index = load_index(o.index);
  const auto queries = parse_queries_file(index, o.queries);
  if (queries.empty()) throw std::runtime_error("query file contains no graphs");
  const auto taus = parse_tau_range(o.tau_list);
  if (o.format == Format::kCsv) std::cout << "tau,avg_candidates,avg_answers,unverified,avg_filter_ms,avg_verify_ms\n";
  if (o.format == Format::kTable)
    std::cout << std::left << std::setw(5) << "tau" << std::setw(16) << "avg_candidates"
              << std::setw(13) << "avg_answers" << std::setw(12) << "unverified" << std::setw(15)
              << "avg_filter_ms" << "avg_verify_ms\n";
  for (auto tau : taus) {
    double cand = 0, ans = 0, fms = 0, vms = 0;
    std::size_t unv = 0;
    for (const auto& h : queries) {
      const auto r = query(index, h, {tau, o.budget, o.threads});
      cand += r.candidates.size();
      ans += r.answers.size();
      unv += r.unverified.size();
      fms += r.filter_ms;
      vms += r.verify_ms;
    }
    const double n = static_cast<double>(queries.size());
    switch (o.format) {
      case Format::kCsv:
        std::cout << tau << "," << fixed(cand / n) << "," << fixed(ans / n) << "," << unv << ","
                  << fixed(fms / n) << "," << fixed(vms / n) << "\n";
        break;
      case Format::kJsonl: {
        json j;
        j["tau"] = tau;
        j["avg_candidates"] = cand / n;
        j["avg_answers"] = ans / n;
        j["unverified"] = unv;
        j["avg_filter_ms"] = fms / n;
        j["avg_verify_ms"] = vms / n;
        std::cout << j.dump() << "\n";
        break;
      }
      case Format::kTable:
        std::cout << std::left << std::setw(5) << tau << std::setw(16) << fixed(cand / n)
                  << std::setw(13) << fixed(ans / n) << std::setw(12) << unv << std::setw(15)
                  << fixed(fms / n) << fixed(vms / n) << "\n";
        break;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph similarity search under edit distance with a succinct q-gram tree index"};
  app.require_subcommand(1);
  Options o;
  const std::map<std::string, Format> formats{
      {"table", Format::kTable}, {"csv", Format::kCsv}, {"jsonl", Format::kJsonl}, {"json", Format::kJsonl}};
  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Output format: table, csv or jsonl")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  };
  auto add_query_flags = [&](CLI::App* c) {
    c->add_option("--budget", o.budget, "Node expansion cap per edit-distance computation")
        ->check(CLI::PositiveNumber);
    c->add_option("--threads", o.threads, "Verification threads (0 = all cores)");
  };

  auto* build = app.add_subcommand("build", "Index a dataset");
  build->add_option("dataset", o.dataset, "Graph dataset (t/v/e text format)")->required()->check(CLI::ExistingFile);
  build->add_option("-o,--output,index", o.index, "Index file to write")->required();
  build->add_option("--l", o.l, "Subregion length")->check(CLI::PositiveNumber);
  build->add_option("--block", o.block, "Block size for the hybrid encoding")->check(CLI::PositiveNumber);
  build->add_option("--fanout", o.fanout, "Tree fan-out")->check(CLI::Range(2u, 1u << 20));
  build->add_option("--x0", o.x0, "Partition anchor |V| (default: smallest |V|)");
  build->add_option("--y0", o.y0, "Partition anchor |E| (default: smallest |E|)");
  add_format(build);

  auto* q = app.add_subcommand("query", "Answer threshold queries");
  q->add_option("index", o.index, "Index file")->required()->check(CLI::ExistingFile);
  q->add_option("queries", o.queries, "Query graphs (same text format)")->required()->check(CLI::ExistingFile);
  q->add_option("--tau", o.tau, "Edit distance threshold")->required()->check(CLI::NonNegativeNumber);
  add_query_flags(q);
  add_format(q);

  auto* stats = app.add_subcommand("stats", "Report index size and encoding statistics");
  stats->add_option("index", o.index, "Index file")->required()->check(CLI::ExistingFile);
  add_format(stats);

  auto* bench = app.add_subcommand("bench", "Average candidates and timings over a threshold range");
  bench->add_option("index", o.index, "Index file")->required()->check(CLI::ExistingFile);
  bench->add_option("queries", o.queries, "Query graphs")->required()->check(CLI::ExistingFile);
  bench->add_option("--tau", o.tau_list, "Thresholds: N, A-B, A..B or a comma list")->capture_default_str();
  add_query_flags(bench);
  o.format = Format::kTable;
  add_format(bench);

  auto* gen = app.add_subcommand("generate", "Write a synthetic molecule-like dataset");
  gen->add_option("-o,--output,file", o.output, "Dataset file to write")->required();
  gen->add_option("--graphs", o.gen.graphs, "Number of graphs")->capture_default_str();
  gen->add_option("--mean-vertices", o.gen.mean_vertices, "Mean vertex count")->capture_default_str();
  gen->add_option("--labels", o.gen.vertex_labels, "Vertex label alphabet size")
      ->check(CLI::Range(1u, 62u))->capture_default_str();
  gen->add_option("--seed", o.gen.seed, "Random seed")->capture_default_str();
  const std::map<std::string, SyntheticModel> models{{"molecule", SyntheticModel::kMolecule},
                                                     {"tree", SyntheticModel::kRandomTree}};
  gen->add_option("--model", o.gen.model, "Graph model: molecule or tree")
      ->transform(CLI::CheckedTransformer(models, CLI::ignore_case));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (bench->parsed() && o.format == Format::kTable && !bench->count("--format")) o.format = Format::kCsv;

  try {
    if (build->parsed()) return cmd_build(o);
    if (q->parsed()) return cmd_query(o);
    if (stats->parsed()) return cmd_stats(o);
    if (bench->parsed()) return cmd_bench(o);
    if (gen->parsed()) return cmd_generate(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "msq: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "msq: parse error at line " << e.line() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "msq: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
