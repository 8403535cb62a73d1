#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "genspace/dimred.hpp"
#include "genspace/metrics.hpp"

namespace genspace {

// Projection dump: header `level_id,set_label,x,y,algorithm,seed`, one row per
// level. Coordinates use the shortest representation that round-trips
// exactly, so distances recomputed from a dump are bit-identical.
void write_projection_csv(std::ostream& out, const Projection& p);
Projection read_projection_csv(std::istream& in, const std::string& source_name);
void save_projection(const std::filesystem::path& path, const Projection& p);
Projection load_projection(const std::filesystem::path& path);

// BC dump: header `level_id,set_label,bc_name,value`, one row per (level, BC),
// levels in corpus order.
void write_bc_csv(std::ostream& out, const std::vector<BcVector>& bcs);
std::vector<BcVector> read_bc_csv(std::istream& in, const std::string& source_name);
void save_bcs(const std::filesystem::path& path, const std::vector<BcVector>& bcs);
std::vector<BcVector> load_bcs(const std::filesystem::path& path);

/// Splits one CSV record; fields may be double-quoted with "" escapes.
std::vector<std::string> split_csv_record(std::string_view line);
/// Quotes a field when it contains a comma, quote or newline.
std::string csv_field(std::string_view s);

}  // namespace genspace
