#pragma once

#include <span>
#include <string>
#include <string_view>

#include "cg/context.hpp"

namespace cg {

/// fig2 (7x11), table1 (20x19), block300x6, block400x4.
std::span<const std::string_view> fixture_names();

/// The fixture as cxt text; SpecError for unknown names.
std::string fixture_text(std::string_view name);
FormalContext fixture_context(std::string_view name);

/// `blocks` disjoint all-ones blocks of rows x cols on the diagonal, zeros elsewhere.
FormalContext block_diagonal_context(std::size_t blocks, std::size_t rows, std::size_t cols);

}  // namespace cg
