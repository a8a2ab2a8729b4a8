#pragma once

#include <string>
#include <vector>

#include "crystalfold/group.hpp"

namespace crystalfold {

/// Canonical names of the built-in groups, in listing order: the 17 wallpaper
/// groups, then the two 1D groups, then the two 3D groups.
const std::vector<std::string>& builtin_group_names();

/// True if `name` is a builtin name or a recognized alias.
bool is_builtin_group(const std::string& name);

/// Resolves aliases such as "pmm" -> "p2mm"; returns canonical names unchanged.
/// Throws std::invalid_argument (listing all valid names) for unknown names.
std::string canonical_group_name(const std::string& name);

/// Constructs a built-in group by canonical name or alias.
CrystalGroup builtin_group(const std::string& name);

}  // namespace crystalfold
