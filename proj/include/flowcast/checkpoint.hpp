#pragma once

#include <string>

#include "flowcast/model.hpp"

namespace flowcast {

// Single-file model checkpoint: 8-byte magic "FLWCKPT1", a JSON block with
// the predictor config, then named parameter tensors with shapes, payload
// little-endian f64. Byte-identical for identical (config, parameters).
void save_checkpoint(const std::string& path, PredictorModel& model);

PredictorModel load_checkpoint(const std::string& path);

} // namespace flowcast
