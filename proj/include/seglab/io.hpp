// Field serialization: flat binary or CSV "i,j,value" payload plus a sidecar
// JSON header. The header is the single source of geometry truth.
#pragma once
#include <string>

#include "seglab/grid.hpp"

namespace seglab {

enum class FieldFormat { Binary, Csv };

/// Writes <base>.json and <base>.bin or <base>.csv.
void save_field(const ScalarField& f, const std::string& base,
                FieldFormat fmt = FieldFormat::Binary);

/// Loads from the sidecar header path (either "<base>" or "<base>.json").
ScalarField load_field(const std::string& base);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace seglab
