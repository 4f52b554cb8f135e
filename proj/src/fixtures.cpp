#include "cg/fixtures.hpp"

#include <array>

#include "cg/error.hpp"
#include "cg/io.hpp"

namespace cg {

namespace detail {
extern const std::string_view kFig2Cxt;
extern const std::string_view kTable1Cxt;
}  // namespace detail

namespace {

constexpr std::array<std::string_view, 4> kNames = {"fig2", "table1", "block300x6", "block400x4"};

}  // namespace

std::span<const std::string_view> fixture_names() { return kNames; }

FormalContext block_diagonal_context(std::size_t blocks, std::size_t rows, std::size_t cols) {
    if (blocks == 0 || rows == 0 || cols == 0) throw SpecError("block-diagonal context needs positive dimensions");
    std::vector<std::string> objects, attributes;
    std::vector<AttributeSet> incidence;
    for (std::size_t m = 0; m < blocks * cols; ++m)
        attributes.push_back("b" + std::to_string(m / cols) + "_" + std::to_string(m % cols));
    for (std::size_t b = 0; b < blocks; ++b)
        for (std::size_t r = 0; r < rows; ++r) {
            objects.push_back("g" + std::to_string(b * rows + r));
            AttributeSet row(blocks * cols);
            for (std::size_t c = 0; c < cols; ++c) row.set(b * cols + c);
            incidence.push_back(std::move(row));
        }
    return FormalContext(std::move(objects), std::move(attributes), std::move(incidence));
}

FormalContext fixture_context(std::string_view name) {
    if (name == "fig2") return parse_context(detail::kFig2Cxt, ContextFormat::kCxt);
    if (name == "table1") return parse_context(detail::kTable1Cxt, ContextFormat::kCxt);
    if (name == "block300x6") return block_diagonal_context(3, 100, 2);
    if (name == "block400x4") return block_diagonal_context(2, 200, 2);
    throw SpecError("unknown fixture '" + std::string(name) + "' (fig2, table1, block300x6, block400x4)");
}

std::string fixture_text(std::string_view name) {
    if (name == "fig2") return std::string(detail::kFig2Cxt);
    if (name == "table1") return std::string(detail::kTable1Cxt);
    return format_context(fixture_context(name), ContextFormat::kCxt);
}

}  // namespace cg
