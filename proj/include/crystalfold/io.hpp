#pragma once

#include <string>

#include "crystalfold/group.hpp"

namespace crystalfold {

/// Reads a group-definition JSON file:
///   { "name": ...,
///     "dimension": n,
///     "generators": [{"matrix": [n*n entries, row-major], "translation": [n]}, ...],
///     "lattice_basis": [[n entries], ...],   // one array per lattice basis vector
///     "polytope_vertices": [[n entries], ...] }
/// Numeric entries may be JSON numbers or exact string tokens such as "1/2",
/// "-1", "sqrt3/2", parsed to double so fixtures stay human-auditable. The
/// assembled group passes through the same validation as the builtins
/// (make_group). Throws std::runtime_error for unreadable or unparseable
/// files and std::invalid_argument for structurally bad content.
CrystalGroup load_group_file(const std::string& path);

/// Builtin group name (or alias) first; anything else that names a regular
/// file is loaded as a group-definition file. Unknown names throw
/// std::invalid_argument listing the valid builtin names.
CrystalGroup resolve_group(const std::string& name_or_path);

}  // namespace crystalfold
