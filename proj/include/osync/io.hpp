#pragma once

#include <string>

#include "osync/manifold.hpp"
#include "osync/model.hpp"

namespace osync {

// Writes the block CSV to `path` and metadata (n, d, sigma, seed,
// noise_kind) to `path + ".json"`. A ground truth other than Z is written
// to `path + ".truth.csv"` and named in the metadata; otherwise the
// ground_truth field is "canonical" or "none".
void save_problem(const SyncProblem& problem, const std::string& path);
SyncProblem load_problem(const std::string& path);

void save_tuple(const StiefelTuple& s, const std::string& path);
StiefelTuple load_tuple(const std::string& path);

}  // namespace osync
