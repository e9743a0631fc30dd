#pragma once

#include "betaelm/model.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace betaelm {

/// Versioned text dump of a trained model. Reals are written as hex floats
/// so that load_model(save_model(m)) reproduces every bit.
void save_model(const TrainedModel& model, std::ostream& out);
TrainedModel load_model(std::istream& in);

std::string model_to_string(const TrainedModel& model);
TrainedModel model_from_string(const std::string& text);

void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace betaelm
