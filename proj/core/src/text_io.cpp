#include "hydro/text_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hydro/errors.hpp"

namespace hydro::text {

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw Error("failed to format number");
    return std::string(buf, ptr);
}

double parse_double(std::string_view token) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError("unparseable number '" + std::string(token) + "'");
    }
    return value;
}

long long parse_int(std::string_view token) {
    token = trim(token);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size()) {
        throw ParseError("unparseable integer '" + std::string(token) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

const std::vector<std::string>& Document::field(std::string_view key) const {
    auto it = fields.find(key);
    if (it == fields.end()) throw ParseError("missing field '" + std::string(key) + "'");
    return it->second;
}

const NamedArray& Document::array(std::string_view name) const {
    auto it = arrays.find(name);
    if (it == arrays.end()) throw ParseError("missing array '" + std::string(name) + "'");
    return it->second;
}

DocumentWriter::DocumentWriter(std::ostream& out, std::string_view magic) : out_(out) {
    out_ << magic << '\n';
}

void DocumentWriter::field(std::string_view key, std::span<const std::string> tokens) {
    out_ << key;
    for (const auto& t : tokens) out_ << ' ' << t;
    out_ << '\n';
}

void DocumentWriter::field(std::string_view key, std::string_view token) {
    out_ << key << ' ' << token << '\n';
}

void DocumentWriter::array(std::string_view name, std::span<const std::size_t> dims,
                           std::span<const double> values) {
    const std::size_t n = std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                                          std::multiplies<>());
    if (n != values.size()) throw DimensionError("array '" + std::string(name) + "' size mismatch");
    out_ << "array " << name << ' ' << dims.size();
    for (auto d : dims) out_ << ' ' << d;
    out_ << '\n';
    const std::size_t row = dims.empty() || dims.back() == 0 ? 1 : dims.back();
    for (std::size_t i = 0; i < n; ++i) {
        out_ << format_double(values[i]);
        out_ << ((i + 1) % row == 0 || i + 1 == n ? '\n' : ' ');
    }
}

Document read_document(std::istream& in, std::string_view expected_magic) {
    Document doc;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty document");
    ++line_no;
    doc.magic = std::string(trim(line));
    if (doc.magic != expected_magic) {
        throw ParseError("expected header '" + std::string(expected_magic) + "', found '" +
                             doc.magic + "'",
                         line_no);
    }
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        std::istringstream tokens{std::string(body)};
        std::string key;
        tokens >> key;
        if (key != "array") {
            std::vector<std::string> values;
            for (std::string t; tokens >> t;) values.push_back(t);
            doc.fields[key] = std::move(values);
            continue;
        }
        std::string name;
        std::size_t rank = 0;
        if (!(tokens >> name >> rank)) throw ParseError("malformed array header", line_no);
        NamedArray arr;
        std::size_t n = 1;
        for (std::size_t i = 0; i < rank; ++i) {
            std::size_t d = 0;
            if (!(tokens >> d)) throw ParseError("malformed array dims", line_no);
            arr.dims.push_back(d);
            n *= d;
        }
        arr.values.reserve(n);
        while (arr.values.size() < n) {
            if (!std::getline(in, line)) throw ParseError("truncated array '" + name + "'", line_no);
            ++line_no;
            std::istringstream row{line};
            for (std::string t; row >> t;) {
                try {
                    arr.values.push_back(parse_double(t));
                } catch (const ParseError& e) {
                    throw ParseError(e.what(), line_no);
                }
            }
        }
        if (arr.values.size() != n) throw ParseError("array '" + name + "' has extra values", line_no);
        doc.arrays[name] = std::move(arr);
    }
    return doc;
}

std::map<std::string, std::string, std::less<>> read_key_values(std::istream& in) {
    std::map<std::string, std::string, std::less<>> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto body = std::string_view(line);
        if (auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        body = trim(body);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key = value", line_no);
        auto key = trim(body.substr(0, eq));
        if (key.empty()) throw ParseError("empty key", line_no);
        out[std::string(key)] = std::string(trim(body.substr(eq + 1)));
    }
    return out;
}

std::map<std::string, std::string, std::less<>> read_key_values_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path + "'");
    return read_key_values(in);
}

}  // namespace hydro::text
