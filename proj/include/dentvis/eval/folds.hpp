#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dentvis/eval/labels.hpp"

namespace dentvis {

struct FoldPlan {
  std::size_t k = 0;
  std::map<std::string, std::uint32_t> fold_of;  // patient id -> fold

  std::vector<std::string> patients_in(std::uint32_t fold) const;
};

/// Patients sorted by id, shuffled by seed, grouped by sex when every patient
/// has one, then dealt round-robin into k folds with one pointer running
/// across the groups. Throws TooFewPatients when fewer than k patients exist.
FoldPlan kfold_plan(std::span<const SampleRecord> records, std::size_t k, std::uint64_t seed);

struct FoldSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

/// Record indices for the given validation fold.
FoldSplit fold_split(std::span<const SampleRecord> records, const FoldPlan& plan, std::uint32_t fold);

}  // namespace dentvis
