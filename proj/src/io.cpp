#include "cg/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "cg/error.hpp"

namespace cg {

namespace {

class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::string& line) {
        if (!std::getline(in_, line)) return false;
        ++number_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }

    std::string expect(const char* what) {
        std::string line;
        if (!next(line)) throw ParseError(std::string("unexpected end of input, expected ") + what, number_ + 1);
        return line;
    }

    std::size_t number() const noexcept { return number_; }

private:
    std::istream& in_;
    std::size_t number_ = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::size_t parse_count(std::string_view text, std::size_t line, const char* what) {
    text = trim(text);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw ParseError(std::string("expected ") + what + ", got '" + std::string(text) + "'", line, 1);
    return value;
}

FormalContext read_cxt(std::istream& in) {
    LineReader lines(in);
    if (trim(lines.expect("'B' header")) != "B")
        throw ParseError("cxt header must be 'B'", lines.number(), 1);
    if (!trim(lines.expect("blank line")).empty())
        throw ParseError("expected blank line after header", lines.number(), 1);
    const std::size_t n_objects = parse_count(lines.expect("object count"), lines.number(), "object count");
    const std::size_t n_attributes =
        parse_count(lines.expect("attribute count"), lines.number(), "attribute count");
    if (n_objects == 0 || n_attributes == 0)
        throw ParseError("context dimensions must be positive", lines.number());
    if (!trim(lines.expect("blank line")).empty())
        throw ParseError("expected blank line after dimensions", lines.number(), 1);

    std::vector<std::string> objects(n_objects);
    std::vector<std::string> attributes(n_attributes);
    for (auto& name : objects) name = lines.expect("object name");
    for (auto& name : attributes) name = lines.expect("attribute name");

    std::vector<AttributeSet> rows(n_objects, AttributeSet(n_attributes));
    for (std::size_t g = 0; g < n_objects; ++g) {
        std::string line = lines.expect("incidence row");
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
        if (line.size() != n_attributes)
            throw ParseError("incidence row has " + std::to_string(line.size()) + " cells, expected " +
                                 std::to_string(n_attributes),
                             lines.number());
        for (std::size_t m = 0; m < n_attributes; ++m) {
            const char c = line[m];
            if (c == 'X' || c == 'x')
                rows[g].set(m);
            else if (c != '.')
                throw ParseError(std::string("unexpected cell character '") + c + "'", lines.number(), m + 1);
        }
    }
    std::string rest;
    while (lines.next(rest)) {
        if (!trim(rest).empty()) throw ParseError("trailing content after incidence rows", lines.number(), 1);
    }
    try {
        return FormalContext(std::move(objects), std::move(attributes), std::move(rows));
    } catch (const DimensionError& e) {
        throw ParseError(e.what(), 1);
    }
}

FormalContext read_fimi(std::istream& in) {
    LineReader lines(in);
    std::vector<std::vector<std::size_t>> transactions;
    std::size_t n_attributes = 0;
    std::string line;
    while (lines.next(line)) {
        std::vector<std::size_t> items;
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
            if (pos >= line.size()) break;
            const std::size_t start = pos;
            while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
            std::size_t value = 0;
            auto [ptr, ec] = std::from_chars(line.data() + start, line.data() + pos, value);
            if (ec != std::errc{} || ptr != line.data() + pos)
                throw ParseError("expected a non-negative attribute index", lines.number(), start + 1);
            items.push_back(value);
            n_attributes = std::max(n_attributes, value + 1);
        }
        transactions.push_back(std::move(items));
    }
    if (transactions.empty()) throw ParseError("no transactions", 1);
    if (n_attributes == 0) throw ParseError("transactions reference no attributes", 1);
    std::vector<AttributeSet> rows;
    rows.reserve(transactions.size());
    for (const auto& t : transactions) rows.emplace_back(BitSet::from_indices(n_attributes, t));
    std::vector<std::string> attributes(n_attributes);
    for (std::size_t m = 0; m < n_attributes; ++m) attributes[m] = std::to_string(m);
    std::vector<std::string> objects(rows.size());
    for (std::size_t g = 0; g < objects.size(); ++g) objects[g] = "g" + std::to_string(g);
    return FormalContext(std::move(objects), std::move(attributes), std::move(rows));
}

FormalContext read_csv(std::istream& in) {
    LineReader lines(in);
    std::string line;
    if (!lines.next(line)) throw ParseError("empty CSV input", 1);
    auto header = split_csv_record(line, lines.number());
    if (header.size() < 2) throw ParseError("CSV header needs at least one attribute", lines.number());
    std::vector<std::string> attributes(header.begin() + 1, header.end());
    {
        std::unordered_set<std::string> seen;
        std::size_t column = header[0].size() + 2;
        for (const auto& a : attributes) {
            if (!seen.insert(a).second) throw ParseError("duplicate attribute name '" + a + "'", 1, column);
            column += a.size() + 1;
        }
    }
    std::vector<std::string> objects;
    std::vector<AttributeSet> rows;
    while (lines.next(line)) {
        if (trim(line).empty()) continue;
        auto cells = split_csv_record(line, lines.number());
        if (cells.size() != attributes.size() + 1)
            throw ParseError("row has " + std::to_string(cells.size()) + " fields, expected " +
                                 std::to_string(attributes.size() + 1),
                             lines.number());
        AttributeSet row(attributes.size());
        for (std::size_t m = 0; m < attributes.size(); ++m) {
            const std::string_view cell = trim(cells[m + 1]);
            if (cell == "1")
                row.set(m);
            else if (cell != "0")
                throw ParseError("cell must be 0 or 1, got '" + std::string(cell) + "'", lines.number(), m + 2);
        }
        objects.push_back(cells[0]);
        rows.push_back(std::move(row));
    }
    if (objects.empty()) throw ParseError("CSV has no object rows", lines.number());
    try {
        return FormalContext(std::move(objects), std::move(attributes), std::move(rows));
    } catch (const DimensionError& e) {
        throw ParseError(e.what(), 1);
    }
}

}  // namespace

std::vector<std::string> split_csv_record(std::string_view line, std::size_t line_no) {
    std::vector<std::string> out;
    std::string field;
    std::size_t i = 0;
    while (true) {
        field.clear();
        if (i < line.size() && line[i] == '"') {
            const std::size_t open = i++;
            while (true) {
                if (i >= line.size()) throw ParseError("unterminated quoted field", line_no, open + 1);
                if (line[i] == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        field += '"';
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                field += line[i++];
            }
            if (i < line.size() && line[i] != ',')
                throw ParseError("unexpected character after quoted field", line_no, i + 1);
        } else {
            while (i < line.size() && line[i] != ',') field += line[i++];
        }
        out.push_back(field);
        if (i >= line.size()) break;
        ++i;  // comma
    }
    return out;
}

std::string quote_csv_field(std::string_view field) {
    if (field.find_first_of(",\"") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

ContextFormat parse_context_format(std::string_view name) {
    if (name == "cxt") return ContextFormat::kCxt;
    if (name == "fimi" || name == "dat") return ContextFormat::kFimi;
    if (name == "csv") return ContextFormat::kCsv;
    throw SpecError("unknown context format '" + std::string(name) + "' (expected cxt, fimi or csv)");
}

std::string_view to_string(ContextFormat format) {
    switch (format) {
        case ContextFormat::kCxt: return "cxt";
        case ContextFormat::kFimi: return "fimi";
        case ContextFormat::kCsv: return "csv";
    }
    return "cxt";
}

ContextFormat format_from_extension(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".dat" || ext == ".fimi") return ContextFormat::kFimi;
    if (ext == ".csv") return ContextFormat::kCsv;
    return ContextFormat::kCxt;
}

FormalContext read_context(std::istream& in, ContextFormat format) {
    switch (format) {
        case ContextFormat::kCxt: return read_cxt(in);
        case ContextFormat::kFimi: return read_fimi(in);
        case ContextFormat::kCsv: return read_csv(in);
    }
    throw SpecError("unknown context format");
}

FormalContext read_context_file(const std::filesystem::path& path, ContextFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
    return read_context(in, format);
}

FormalContext parse_context(std::string_view text, ContextFormat format) {
    std::istringstream in{std::string(text)};
    return read_context(in, format);
}

void write_context(std::ostream& out, const FormalContext& ctx, ContextFormat format) {
    const std::size_t n = ctx.object_count();
    const std::size_t m = ctx.attribute_count();
    switch (format) {
        case ContextFormat::kCxt: {
            out << "B\n\n" << n << '\n' << m << "\n\n";
            for (const auto& name : ctx.object_names()) out << name << '\n';
            for (const auto& name : ctx.attribute_names()) out << name << '\n';
            for (std::size_t g = 0; g < n; ++g) {
                std::string row(m, '.');
                ctx.row(g).for_each([&](std::size_t a) { row[a] = 'X'; });
                out << row << '\n';
            }
            break;
        }
        case ContextFormat::kFimi: {
            for (std::size_t g = 0; g < n; ++g) {
                bool first = true;
                ctx.row(g).for_each([&](std::size_t a) {
                    if (!first) out << ' ';
                    out << a;
                    first = false;
                });
                out << '\n';
            }
            break;
        }
        case ContextFormat::kCsv: {
            for (const auto& name : ctx.attribute_names()) out << ',' << quote_csv_field(name);
            out << '\n';
            for (std::size_t g = 0; g < n; ++g) {
                out << quote_csv_field(ctx.object_names()[g]);
                for (std::size_t a = 0; a < m; ++a) out << (ctx.incidence(g, a) ? ",1" : ",0");
                out << '\n';
            }
            break;
        }
    }
}

std::string format_context(const FormalContext& ctx, ContextFormat format) {
    std::ostringstream out;
    write_context(out, ctx, format);
    return out.str();
}

}  // namespace cg
