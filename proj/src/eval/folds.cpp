#include "dentvis/eval/folds.hpp"

#include <optional>

#include "dentvis/core/error.hpp"
#include "dentvis/core/rng.hpp"

namespace dentvis {

std::vector<std::string> FoldPlan::patients_in(std::uint32_t fold) const {
  std::vector<std::string> out;
  for (const auto& [patient, f] : fold_of)
    if (f == fold) out.push_back(patient);
  return out;
}

FoldPlan kfold_plan(std::span<const SampleRecord> records, std::size_t k, std::uint64_t seed) {
  require(k >= 1, Errc::InvalidArgument, "k must be >= 1");
  std::map<std::string, std::optional<Sex>> patients;
  for (const auto& r : records) {
    auto [it, inserted] = patients.emplace(r.patient_id, r.sex());
    if (!inserted && !it->second) it->second = r.sex();
  }
  require(patients.size() >= k, Errc::TooFewPatients,
          std::to_string(patients.size()) + " patients cannot fill " + std::to_string(k) + " folds");

  std::vector<std::string> order;
  bool all_sexed = true;
  for (const auto& [id, sex] : patients) {
    order.push_back(id);
    all_sexed = all_sexed && sex.has_value();
  }
  Rng rng(seed);
  rng.shuffle(std::span<std::string>(order));

  std::vector<std::vector<std::string>> strata;
  if (all_sexed) {
    strata.resize(2);
    for (const auto& id : order) strata[*patients[id] == Sex::Male ? 0 : 1].push_back(id);
  } else {
    strata.push_back(order);
  }

  FoldPlan plan;
  plan.k = k;
  std::size_t next = 0;
  for (const auto& group : strata)
    for (const auto& id : group) plan.fold_of[id] = static_cast<std::uint32_t>(next++ % k);
  return plan;
}

FoldSplit fold_split(std::span<const SampleRecord> records, const FoldPlan& plan, std::uint32_t fold) {
  require(fold < plan.k, Errc::IndexOutOfRange, "fold " + std::to_string(fold) + " out of range");
  FoldSplit split;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto it = plan.fold_of.find(records[i].patient_id);
    require(it != plan.fold_of.end(), Errc::InvalidArgument, "patient " + records[i].patient_id + " not in plan");
    (it->second == fold ? split.validation : split.train).push_back(i);
  }
  return split;
}

}  // namespace dentvis
