#pragma once

#include "pce/polybasis.hpp"

#include <string>

namespace pce {

/// Header x1..xn,y; 17 significant digits so doubles round-trip.
void write_dataset_csv(const std::string& path, const Dataset& data);

/// Parses the same format; throws IoError with a descriptive message on
/// malformed headers, ragged rows, or non-numeric fields.
Dataset read_dataset_csv(const std::string& path);

}  // namespace pce
