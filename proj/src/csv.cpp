#include "rrk/csv.hpp"

#include <charconv>
#include <cmath>

#include "rrk/error.hpp"

namespace rrk {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_escape(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw Error("cannot open " + path.string() + " for writing");
}

void CsvWriter::header(std::initializer_list<std::string_view> cols) {
    for (auto c : cols) field(c);
    end_row();
}

void CsvWriter::header(const std::vector<std::string>& cols) {
    for (const auto& c : cols) field(std::string_view(c));
    end_row();
}

CsvWriter& CsvWriter::field(std::string_view s) {
    if (!first_) out_ << ',';
    out_ << csv_escape(s);
    first_ = false;
    return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(std::string_view(format_double(v))); }

CsvWriter& CsvWriter::field(std::optional<double> v) {
    return v ? field(*v) : field(std::string_view{});
}

CsvWriter& CsvWriter::field(long long v) { return field(std::string_view(std::to_string(v))); }

void CsvWriter::end_row() {
    out_ << '\n';
    first_ = true;
}

}  // namespace rrk
