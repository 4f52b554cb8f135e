#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cg/context.hpp"

namespace cg {

enum class ContextFormat { kCxt, kFimi, kCsv };

/// "cxt" | "fimi" | "dat" | "csv"; throws SpecError otherwise.
ContextFormat parse_context_format(std::string_view name);
std::string_view to_string(ContextFormat format);
/// Guesses from the file extension; defaults to cxt.
ContextFormat format_from_extension(const std::filesystem::path& path);

/// Burmeister:
///   B
///   <blank>
///   |G|
///   |M|
///   <blank>
///   object names, attribute names, then |G| rows over {'X', '.'}.
///
/// FIMI: one transaction per line, whitespace-separated attribute indices;
/// |M| = 1 + max index. Names are synthesized on read.
///
/// CSV: header ",m1,m2,..." then "name,0,1,..." per object. Fields containing
/// commas or quotes are double-quoted.
FormalContext read_context(std::istream& in, ContextFormat format);
FormalContext read_context_file(const std::filesystem::path& path, ContextFormat format);
FormalContext parse_context(std::string_view text, ContextFormat format);

void write_context(std::ostream& out, const FormalContext& ctx, ContextFormat format);
std::string format_context(const FormalContext& ctx, ContextFormat format);

/// Splits one CSV record; quoted fields may hold commas and doubled quotes but
/// no line breaks. Errors report `line_no`.
std::vector<std::string> split_csv_record(std::string_view line, std::size_t line_no = 1);
/// Quotes a field when it contains a comma or a quote.
std::string quote_csv_field(std::string_view field);

}  // namespace cg
