#include "osync/io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "osync/blockmat.hpp"
#include "osync/errors.hpp"

namespace osync {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}

bool is_canonical(const StiefelTuple& g) {
  return g.stacked() == StiefelTuple::synchronized(g.n(), g.d(), g.d()).stacked();
}

std::string base_name(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::string directory(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string() : path.substr(0, slash + 1);
}

}  // namespace

void save_problem(const SyncProblem& problem, const std::string& path) {
  {
    auto out = open_out(path);
    write_block_csv(problem.data(), out);
  }
  nlohmann::ordered_json meta;
  meta["n"] = problem.n();
  meta["d"] = problem.d();
  meta["sigma"] = problem.sigma();
  meta["seed"] = problem.seed();
  meta["noise_kind"] = to_string(problem.noise_kind());
  if (!problem.ground_truth()) {
    meta["ground_truth"] = "none";
  } else if (is_canonical(*problem.ground_truth())) {
    meta["ground_truth"] = "canonical";
  } else {
    const std::string truth = path + ".truth.csv";
    save_tuple(*problem.ground_truth(), truth);
    meta["ground_truth"] = base_name(truth);
  }
  auto out = open_out(path + ".json");
  out << meta.dump(2) << '\n';
}

SyncProblem load_problem(const std::string& path) {
  BlockMatrix a = [&] {
    auto in = open_in(path);
    return read_block_csv(in);
  }();
  double sigma = 0.0;
  std::uint64_t seed = 0;
  NoiseKind kind = NoiseKind::Custom;
  std::optional<StiefelTuple> truth;
  std::ifstream meta_in(path + ".json");
  if (meta_in) {
    nlohmann::json meta;
    try {
      meta_in >> meta;
    } catch (const nlohmann::json::exception& e) {
      throw InputError("malformed metadata '" + path + ".json': " + e.what());
    }
    if (meta.value("n", a.n()) != a.n() || meta.value("d", a.d()) != a.d()) {
      throw InputError("metadata dimensions disagree with '" + path + "'");
    }
    sigma = meta.value("sigma", 0.0);
    seed = meta.value("seed", std::uint64_t{0});
    kind = noise_kind_from_string(meta.value("noise_kind", std::string("custom")));
    const std::string gt = meta.value("ground_truth", std::string("none"));
    if (gt == "canonical") {
      truth = StiefelTuple::synchronized(a.n(), a.d(), a.d());
    } else if (gt != "none") {
      truth = load_tuple(directory(path) + gt);
    }
  }
  return SyncProblem(std::move(a), sigma, std::move(truth), seed, kind);
}

void save_tuple(const StiefelTuple& s, const std::string& path) {
  auto out = open_out(path);
  write_tuple_csv(s, out);
}

StiefelTuple load_tuple(const std::string& path) {
  auto in = open_in(path);
  return read_tuple_csv(in);
}

}  // namespace osync
