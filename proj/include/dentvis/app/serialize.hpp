#pragma once

#include "dentvis/app/container.hpp"
#include "dentvis/app/pipeline.hpp"

namespace dentvis::app {

/// Module "bow" or "cnn"; the header records task, classes, pipeline config
/// and, for ECOC models, the learner count.
ModelContainer model_to_container(const Model& m);
/// Throws MalformedHeader for unknown modules or inconsistent tensors.
Model model_from_container(const ModelContainer& c);

nlohmann::json layers_to_json(const std::vector<nn::LayerSpec>& layers);
std::vector<nn::LayerSpec> layers_from_json(const nlohmann::json& j);

/// Module "descriptors": tensors "vectors" (n x dim) and "centers" (n x 2).
ModelContainer descriptors_to_container(const DescriptorSet& d, const nlohmann::json& meta);
DescriptorSet descriptors_from_container(const ModelContainer& c);

}  // namespace dentvis::app
