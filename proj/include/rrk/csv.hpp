#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rrk {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

/// Quotes a field containing a comma, quote or line break (doubling any
/// embedded quotes); other fields pass through unchanged.
std::string csv_escape(std::string_view s);

/// Minimal CSV writer. Method names such as "RK(4,4)" contain commas and
/// come out quoted.
class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path);

    void header(std::initializer_list<std::string_view> cols);
    void header(const std::vector<std::string>& cols);

    CsvWriter& field(std::string_view s);
    CsvWriter& field(double v);
    CsvWriter& field(std::optional<double> v);  // empty field for nullopt
    CsvWriter& field(long long v);
    void end_row();

private:
    std::ofstream out_;
    bool first_ = true;
};

}  // namespace rrk
