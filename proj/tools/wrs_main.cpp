#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "wrs/alias_table.hpp"
#include "wrs/counting_rng.hpp"
#include "wrs/mass_sample.hpp"
#include "wrs/population.hpp"
#include "wrs/sample_sink.hpp"
#include "wrs/samplers.hpp"
#include "wrs/stats.hpp"
#include "wrs/weight_stream.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;
constexpr int kExitIo = 3;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

static_assert(std::endian::native == std::endian::little,
              "raw .f64 weight files are little-endian");

bool has_f64_extension(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".f64") == 0;
}

std::vector<double> read_weights(const std::string& path) {
  std::vector<double> w;
  if (has_f64_extension(path)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    in.seekg(0, std::ios::end);
    const std::streamoff bytes = in.tellg();
    in.seekg(0, std::ios::beg);
    if (bytes < 0 || bytes % 8 != 0)
      throw IoError(path + ": size is not a multiple of 8 bytes");
    w.resize(static_cast<std::size_t>(bytes) / 8);
    if (!w.empty() &&
        !in.read(reinterpret_cast<char*>(w.data()), bytes))
      throw IoError("short read on " + path);
    return w;
  }
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  double v = 0.0;
  while (in >> v) w.push_back(v);
  if (!in.eof()) throw IoError(path + ": malformed weight value");
  return w;
}

void write_weights(const std::string& path, const std::vector<double>& w) {
  if (has_f64_extension(path)) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(w.data()),
              static_cast<std::streamsize>(w.size() * sizeof(double)));
    if (!out) throw IoError("write failed on " + path);
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << std::setprecision(17);
  for (double v : w) out << v << '\n';
  if (!out) throw IoError("write failed on " + path);
}

std::vector<wrs::SamplerKind> parse_samplers(
    const std::vector<std::string>& names) {
  std::vector<wrs::SamplerKind> kinds;
  for (const std::string& name : names) {
    const auto k = wrs::parse_sampler(name);
    if (!k) throw CLI::ValidationError("--algos", "unknown algorithm: " + name);
    kinds.push_back(*k);
  }
  return kinds;
}

std::vector<wrs::PopulationKind> parse_populations(
    const std::vector<std::string>& names) {
  std::vector<wrs::PopulationKind> kinds;
  for (const std::string& name : names) {
    const auto k = wrs::parse_population(name);
    if (!k) throw CLI::ValidationError("--kinds", "unknown population: " + name);
    kinds.push_back(*k);
  }
  return kinds;
}

// ---------------------------------------------------------------- gen ----

int run_gen(const std::string& kind_name, std::uint64_t n, std::uint64_t seed,
            const std::string& out_path) {
  const auto kind = wrs::parse_population(kind_name);
  if (!kind) throw CLI::ValidationError("--kind", "unknown population: " + kind_name);
  write_weights(out_path, wrs::gen_population({*kind, n, seed}));
  return kExitOk;
}

// ------------------------------------------------------------- sample ----

std::vector<std::uint64_t> run_array(wrs::SamplerKind kind,
                                     std::span<const double> w,
                                     std::uint64_t s, wrs::CountingRng& rng) {
  using wrs::SamplerKind;
  switch (kind) {
    case SamplerKind::beta:
    case SamplerKind::binom:
    case SamplerKind::hybrid: {
      wrs::ArraySink sink;
      wrs::ListWeightStream stream(w);
      if (kind == SamplerKind::beta)
        wrs::sample_online_beta(stream, s, rng, sink);
      else if (kind == SamplerKind::binom)
        wrs::sample_conditional_binomial(stream, s, rng, sink);
      else
        wrs::sample_hybrid(stream, s, rng, sink);
      return sink.sample();
    }
    case SamplerKind::alias: {
      const wrs::AliasTable table = wrs::alias_build(w);
      std::vector<std::uint64_t> sample;
      sample.reserve(s);
      for (std::uint64_t i = 0; i < s; ++i)
        sample.push_back(wrs::alias_draw(table, rng));
      return sample;
    }
    default: {
      const std::vector<std::uint64_t> counts = wrs::run_dense(kind, w, s, rng);
      std::vector<std::uint64_t> sample;
      sample.reserve(s);
      for (std::size_t i = 0; i < counts.size(); ++i)
        for (std::uint64_t c = 0; c < counts[i]; ++c) sample.push_back(i);
      return sample;
    }
  }
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> run_sparse(
    wrs::SamplerKind kind, std::span<const double> w, std::uint64_t s,
    wrs::CountingRng& rng) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  using wrs::SamplerKind;
  if (kind == SamplerKind::beta || kind == SamplerKind::binom ||
      kind == SamplerKind::hybrid) {
    wrs::SparseCountSink sink;
    wrs::ListWeightStream stream(w);
    if (kind == SamplerKind::beta)
      wrs::sample_online_beta(stream, s, rng, sink);
    else if (kind == SamplerKind::binom)
      wrs::sample_conditional_binomial(stream, s, rng, sink);
    else
      wrs::sample_hybrid(stream, s, rng, sink);
    pairs.assign(sink.counts().sparse_counts().begin(),
                 sink.counts().sparse_counts().end());
  } else {
    const std::vector<std::uint64_t> counts = wrs::run_dense(kind, w, s, rng);
    for (std::size_t i = 0; i < counts.size(); ++i)
      if (counts[i] > 0) pairs.emplace_back(i, counts[i]);
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

int run_sample(const std::string& algo_name, const std::string& weights_path,
               std::optional<double> total, std::uint64_t s,
               std::uint64_t seed, const std::string& mode,
               const std::string& out_path) {
  const auto kind = wrs::parse_sampler(algo_name);
  if (!kind) throw CLI::ValidationError("--algo", "unknown algorithm: " + algo_name);

  std::vector<double> w = read_weights(weights_path);
  if (total) {
    if (!(*total > 0.0))
      throw CLI::ValidationError("--total", "must be positive");
    const double scale = 1.0 / *total;
    for (double& x : w) x *= scale;
  }

  std::ostringstream body;
  wrs::CountingRng rng(seed);
  if (mode == "array") {
    for (std::uint64_t idx : run_array(*kind, w, s, rng)) body << idx << '\n';
  } else if (mode == "dense") {
    for (std::uint64_t c : wrs::run_dense(*kind, w, s, rng)) body << c << '\n';
  } else if (mode == "sparse") {
    for (const auto& [idx, c] : run_sparse(*kind, w, s, rng))
      body << idx << ',' << c << '\n';
  } else {
    throw CLI::ValidationError("--output", "must be array, dense or sparse");
  }

  if (out_path == "-") {
    std::cout << body.str();
    if (!std::cout) throw IoError("write to standard output failed");
  } else {
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot open " + out_path + " for writing");
    out << body.str();
    if (!out) throw IoError("write failed on " + out_path);
  }
  return kExitOk;
}

// -------------------------------------------------------------- bench ----

// Keeps results observable so the optimizer cannot drop a measured run.
std::atomic<std::uint64_t> g_bench_guard{0};

struct BenchCell {
  wrs::SamplerKind algo;
  std::string population;
  std::optional<wrs::PopulationKind> kind;  // nullopt: weights file
  std::uint64_t n = 0;
  std::uint64_t s = 0;
  std::uint64_t seed = 0;
};

struct BenchRow {
  std::uint64_t wall_ns = 0;
  std::uint64_t rng_draws = 0;
};

void bench_once(const BenchCell& cell, std::span<const double> w,
                const std::string& mode, wrs::CountingRng& rng,
                BenchRow* row) {
  using wrs::SamplerKind;
  const bool streaming = cell.algo == SamplerKind::beta ||
                         cell.algo == SamplerKind::binom ||
                         cell.algo == SamplerKind::hybrid;

  // Sinks are allocated outside the timed region; everything the algorithm
  // itself does (cumulative table, sort, alias construction) is inside.
  std::optional<wrs::DenseCountSink> dense_sink;
  std::optional<wrs::SparseCountSink> sparse_sink;
  std::optional<wrs::ArraySink> array_sink;
  wrs::SampleSink* sink = nullptr;
  if (streaming || cell.algo == SamplerKind::alias) {
    if (mode == "dense") {
      dense_sink.emplace(w.size());
      sink = &*dense_sink;
    } else if (mode == "sparse") {
      sparse_sink.emplace();
      sink = &*sparse_sink;
    } else {
      array_sink.emplace();
      sink = &*array_sink;
    }
  }

  std::uint64_t guard = 0;
  const auto t0 = std::chrono::steady_clock::now();
  switch (cell.algo) {
    case SamplerKind::naive:
    case SamplerKind::sorted: {
      const wrs::SampleCounts counts =
          cell.algo == SamplerKind::naive
              ? wrs::sample_naive(w, cell.s, rng)
              : wrs::sample_sorted_uniforms(w, cell.s, rng);
      if (mode == "dense") {
        guard = counts.total();
      } else if (mode == "sparse") {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
        const auto& v = counts.dense_counts();
        for (std::size_t i = 0; i < v.size(); ++i)
          if (v[i] > 0) pairs.emplace_back(i, v[i]);
        guard = pairs.size();
      } else {
        std::vector<std::uint64_t> sample;
        sample.reserve(cell.s);
        const auto& v = counts.dense_counts();
        for (std::size_t i = 0; i < v.size(); ++i)
          for (std::uint64_t c = 0; c < v[i]; ++c) sample.push_back(i);
        guard = sample.size();
      }
      break;
    }
    case SamplerKind::beta:
    case SamplerKind::binom:
    case SamplerKind::hybrid: {
      wrs::ListWeightStream stream(w, std::nullopt, /*validate=*/false);
      if (cell.algo == SamplerKind::beta)
        wrs::sample_online_beta(stream, cell.s, rng, *sink);
      else if (cell.algo == SamplerKind::binom)
        wrs::sample_conditional_binomial(stream, cell.s, rng, *sink);
      else
        wrs::sample_hybrid(stream, cell.s, rng, *sink);
      guard = cell.s;
      break;
    }
    case SamplerKind::alias: {
      const wrs::AliasTable table = wrs::alias_build(w);
      for (std::uint64_t i = 0; i < cell.s; ++i)
        sink->accept(wrs::alias_draw(table, rng), 1);
      guard = table.size();
      break;
    }
  }
  const auto t1 = std::chrono::steady_clock::now();
  g_bench_guard.fetch_add(guard, std::memory_order_relaxed);

  if (row) {
    row->wall_ns = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    row->rng_draws = rng.draws();
  }
}

BenchRow bench_cell(const BenchCell& cell,
                    const std::vector<double>* file_weights,
                    const std::string& mode) {
  std::vector<double> generated;
  std::span<const double> w;
  if (file_weights) {
    w = *file_weights;
  } else {
    generated = wrs::gen_population({*cell.kind, cell.n, cell.seed});
    w = generated;
  }

  {
    wrs::CountingRng warmup(cell.seed);
    bench_once(cell, w, mode, warmup, nullptr);
  }
  wrs::CountingRng rng(cell.seed);
  BenchRow row;
  bench_once(cell, w, mode, rng, &row);
  return row;
}

int run_bench(const std::vector<std::string>& algo_names,
              const std::vector<std::string>& kind_names,
              const std::vector<std::uint64_t>& ns,
              const std::vector<std::uint64_t>& ss,
              const std::vector<std::uint64_t>& seeds, unsigned jobs,
              const std::string& weights_path, const std::string& mode) {
  const std::vector<wrs::SamplerKind> algos = parse_samplers(algo_names);

  std::vector<double> file_weights;
  std::vector<BenchCell> cells;
  if (!weights_path.empty()) {
    file_weights = read_weights(weights_path);
    for (const auto algo : algos)
      for (const auto s : ss)
        for (const auto seed : seeds)
          cells.push_back({algo, "file", std::nullopt, file_weights.size(), s,
                           seed});
  } else {
    if (kind_names.empty() || ns.empty())
      throw CLI::ValidationError(
          "--kinds/--n", "required unless --weights provides the population");
    const std::vector<wrs::PopulationKind> kinds = parse_populations(kind_names);
    for (const auto algo : algos)
      for (const auto kind : kinds)
        for (const auto n : ns)
          for (const auto s : ss)
            for (const auto seed : seeds)
              cells.push_back(
                  {algo, wrs::to_string(kind), kind, n, s, seed});
  }

  std::vector<BenchRow> rows(cells.size());
  const std::vector<double>* wfile =
      weights_path.empty() ? nullptr : &file_weights;
  if (jobs <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      rows[i] = bench_cell(cells[i], wfile, mode);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const unsigned count = std::min<std::size_t>(jobs, cells.size());
    workers.reserve(count);
    for (unsigned t = 0; t < count; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < cells.size();
             i = next.fetch_add(1))
          rows[i] = bench_cell(cells[i], wfile, mode);
      });
    }
    for (auto& worker : workers) worker.join();
  }

  std::ostream& out = std::cout;
  out << "algorithm,population,n,s,seed,wall_ns,rng_draws,output_mode\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const BenchCell& c = cells[i];
    out << wrs::to_string(c.algo) << ',' << c.population << ',' << c.n << ','
        << c.s << ',' << c.seed << ',' << rows[i].wall_ns << ','
        << rows[i].rng_draws << ',' << mode << '\n';
  }
  if (!out) throw IoError("write to standard output failed");
  return kExitOk;
}

// ------------------------------------------------------------- verify ----

struct VerifyCase {
  std::string name;
  std::vector<double> weights;
  std::uint64_t s;
};

int run_verify(const std::vector<std::string>& algo_names,
               const std::vector<std::uint64_t>& seeds,
               std::uint64_t replicates) {
  const std::vector<wrs::SamplerKind> algos = parse_samplers(algo_names);
  const std::vector<VerifyCase> cases = {
      {"tri", {0.2, 0.3, 0.5}, 3},
      {"penta", {0.05, 0.15, 0.2, 0.25, 0.35}, 4},
  };

  std::ostringstream csv;
  csv << "algorithm,case,seed,statistic,dof,p_value,pass\n";
  bool all_ok = true;
  for (const auto algo : algos) {
    const wrs::DenseSamplerFn fn = [algo](std::span<const double> w,
                                          std::uint64_t s,
                                          wrs::CountingRng& rng) {
      return wrs::run_dense(algo, w, s, rng);
    };
    for (const VerifyCase& vc : cases) {
      std::size_t passed = 0;
      for (const std::uint64_t seed : seeds) {
        wrs::CountingRng rng(seed);
        const wrs::GofReport report = wrs::gof_multinomial(
            fn, vc.weights, vc.s, replicates, rng, wrs::GofMode::exact);
        const bool pass = report.p_value > 0.001;
        passed += pass ? 1 : 0;
        csv << wrs::to_string(algo) << ',' << vc.name << ',' << seed << ','
            << std::setprecision(10) << report.statistic << ',' << report.dof
            << ',' << report.p_value << ',' << (pass ? "1" : "0") << '\n';
      }
      // Pass rule: at least 80% of seeds (4 of 5) clear p > 0.001.
      const bool case_ok = passed * 5 >= seeds.size() * 4;
      all_ok = all_ok && case_ok;
      std::cout << (case_ok ? "PASS" : "FAIL") << ' ' << wrs::to_string(algo)
                << " case=" << vc.name << " seeds_passed=" << passed << '/'
                << seeds.size() << '\n';
    }
  }
  std::cout << csv.str();
  if (!std::cout) throw IoError("write to standard output failed");
  return all_ok ? kExitOk : kExitVerify;
}

// ----------------------------------------------------------- masspois ----

int run_masspois(double lambda, std::uint64_t s, std::uint64_t seed) {
  wrs::UnimodalWalker walker(
      [lambda](std::int64_t k) { return wrs::poisson_pmf(k, lambda); },
      static_cast<std::int64_t>(std::floor(lambda)));
  wrs::CountingRng rng(seed);

  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  const std::function<void(const std::int64_t&, std::uint64_t)> tally =
      [&](const std::int64_t& value, std::uint64_t multiplicity) {
        const double v = static_cast<double>(value);
        count += multiplicity;
        const double delta = v - mean;
        mean += delta * static_cast<double>(multiplicity) /
                static_cast<double>(count);
        m2 += delta * (v - mean) * static_cast<double>(multiplicity);
      };

  const auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t pulls = wrs::mass_sample<std::int64_t>(walker, s, rng, tally);
  const auto t1 = std::chrono::steady_clock::now();

  const double variance =
      count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  std::cout << std::setprecision(12) << "s=" << count << " mean=" << mean
            << " variance=" << variance << " support_consumed=" << pulls
            << " wall_ns="
            << std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0)
                   .count()
            << '\n';
  if (!std::cout) throw IoError("write to standard output failed");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted random sampling toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a benchmark weight population");
  std::string gen_kind;
  std::uint64_t gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--kind", gen_kind, "uniform|geometric|gaussian")->required();
  gen->add_option("--n", gen_n, "population size")
      ->required()
      ->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "rng seed")->required();
  gen->add_option("--out", gen_out,
                  "output file (.f64 for raw little-endian doubles)")
      ->required();

  // sample
  auto* sample = app.add_subcommand("sample", "Draw a weighted sample");
  std::string sample_algo;
  std::string sample_weights;
  double sample_total = 0.0;
  std::uint64_t sample_s = 0;
  std::uint64_t sample_seed = 0;
  std::string sample_mode = "dense";
  std::string sample_out = "-";
  sample->add_option("--algo", sample_algo,
                     "naive|sorted|beta|binom|hybrid|alias")
      ->required();
  sample->add_option("--weights", sample_weights, "weight file")->required();
  auto* total_opt = sample->add_option(
      "--total", sample_total, "divide weights by this total instead of "
                               "requiring them to sum to 1");
  sample->add_option("--s", sample_s, "number of draws")->required();
  sample->add_option("--seed", sample_seed, "rng seed")->required();
  sample->add_option("--output", sample_mode, "array|dense|sparse");
  sample->add_option("--out", sample_out, "output file, - for stdout");

  // bench
  auto* bench = app.add_subcommand("bench", "Benchmark sweep, CSV on stdout");
  std::vector<std::string> bench_algos;
  std::vector<std::string> bench_kinds;
  std::vector<std::uint64_t> bench_n;
  std::vector<std::uint64_t> bench_s;
  std::vector<std::uint64_t> bench_seeds;
  unsigned bench_jobs = 1;
  std::string bench_weights;
  std::string bench_mode = "dense";
  bench->add_option("--algos", bench_algos, "comma-separated algorithm list")
      ->required()
      ->delimiter(',');
  auto* kinds_opt =
      bench->add_option("--kinds", bench_kinds, "population kinds")
          ->delimiter(',');
  auto* n_opt = bench->add_option("--n", bench_n, "population sizes")
                    ->delimiter(',')
                    ->check(CLI::PositiveNumber);
  bench->add_option("--s", bench_s, "sample sizes")
      ->required()
      ->delimiter(',');
  bench->add_option("--seeds", bench_seeds, "seeds")->required()->delimiter(',');
  bench->add_option("--jobs", bench_jobs, "parallel workers")
      ->check(CLI::PositiveNumber);
  bench->add_option("--weights", bench_weights,
                    "benchmark this weight file instead of generated "
                    "populations")
      ->excludes(kinds_opt)
      ->excludes(n_opt);
  bench->add_option("--output", bench_mode,
                    "sink form used during measurement: array|dense|sparse");

  // verify
  auto* verify = app.add_subcommand(
      "verify", "Goodness-of-fit verification against the exact multinomial");
  std::vector<std::string> verify_algos = {"naive",  "sorted", "beta",
                                           "binom",  "hybrid", "alias"};
  std::vector<std::uint64_t> verify_seeds = {1, 2, 3, 4, 5};
  std::uint64_t verify_replicates = 20000;
  verify->add_option("--algos", verify_algos, "algorithms to verify")
      ->delimiter(',');
  verify->add_option("--seeds", verify_seeds, "seeds (pass rule: 80%)")
      ->delimiter(',');
  verify->add_option("--replicates", verify_replicates, "replicates per seed")
      ->check(CLI::PositiveNumber);

  // masspois
  auto* masspois = app.add_subcommand(
      "masspois", "Poisson demonstration of on-demand mass sampling");
  double mp_lambda = 10000.0;
  std::uint64_t mp_s = 0;
  std::uint64_t mp_seed = 1;
  masspois->add_option("--lambda", mp_lambda, "Poisson rate")
      ->check(CLI::PositiveNumber);
  masspois->add_option("--s", mp_s, "number of draws")
      ->required()
      ->check(CLI::PositiveNumber);
  masspois->add_option("--seed", mp_seed, "rng seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return run_gen(gen_kind, gen_n, gen_seed, gen_out);
    if (*sample) {
      std::optional<double> total;
      if (total_opt->count() > 0) total = sample_total;
      return run_sample(sample_algo, sample_weights, total, sample_s,
                        sample_seed, sample_mode, sample_out);
    }
    if (*bench)
      return run_bench(bench_algos, bench_kinds, bench_n, bench_s, bench_seeds,
                       bench_jobs, bench_weights, bench_mode);
    if (*verify) return run_verify(verify_algos, verify_seeds, verify_replicates);
    if (*masspois) return run_masspois(mp_lambda, mp_s, mp_seed);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
