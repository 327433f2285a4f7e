#pragma once

#include <string>

#include "di/inference.hpp"

namespace di {

// Versioned binary container bundling the intent set, vocabulary,
// Gaussian statistics, transition matrix, hyperparameters, priors, and a
// (path, hash) reference to the embedding model file. Doubles survive the
// round trip exactly.
void save_model(const FittedModel& model, const std::string& path);

// Loads the container, then resolves and attaches the referenced embedding
// model: embedding_override (when non-empty) or the stored path, looked up
// as given and relative to the model file. Fails on corruption, unknown
// major version, or an embedding hash mismatch.
FittedModel load_model(const std::string& path, const std::string& embedding_override = "");

}  // namespace di
