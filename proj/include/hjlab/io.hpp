#pragma once

#include <filesystem>
#include <string>

#include "hjlab/grid_function.hpp"
#include "hjlab/solver.hpp"

namespace hjlab {

/// Write text to path via a temporary file and rename, so readers never see
/// a partial file.
void atomic_write_text(const std::filesystem::path& path, const std::string& text);

/// "x,u" rows at 17 significant digits (doubles round-trip exactly).
void write_csv(const std::filesystem::path& path, const GridFunction& u);

/// "t,x,u" rows, one block per record time.
void write_csv(const std::filesystem::path& path, const TimeSlab& slab);

/// Read a GridFunction back from an "x,u" CSV.
GridFunction read_csv_grid(const std::filesystem::path& path);

}  // namespace hjlab
