#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hydro::text {

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

/// Parses a full decimal or scientific literal; throws ParseError otherwise.
double parse_double(std::string_view token);
long long parse_int(std::string_view token);

std::vector<std::string_view> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

/// A named real-valued array with explicit dimensions (row-major values).
struct NamedArray {
    std::vector<std::size_t> dims;
    std::vector<double> values;
};

/// Self-describing text document: a magic line, `key tokens...` lines, and
/// `array <name> <rank> <dims...>` blocks followed by their values.
struct Document {
    std::string magic;
    std::map<std::string, std::vector<std::string>, std::less<>> fields;
    std::map<std::string, NamedArray, std::less<>> arrays;

    const std::vector<std::string>& field(std::string_view key) const;
    const NamedArray& array(std::string_view name) const;
};

class DocumentWriter {
public:
    DocumentWriter(std::ostream& out, std::string_view magic);

    void field(std::string_view key, std::span<const std::string> tokens);
    void field(std::string_view key, std::string_view token);
    void array(std::string_view name, std::span<const std::size_t> dims,
               std::span<const double> values);

private:
    std::ostream& out_;
};

Document read_document(std::istream& in, std::string_view expected_magic);

/// Flat `key = value` configuration text; `#` starts a comment.
std::map<std::string, std::string, std::less<>> read_key_values(std::istream& in);
std::map<std::string, std::string, std::less<>> read_key_values_file(const std::string& path);

}  // namespace hydro::text
