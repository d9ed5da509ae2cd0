#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace bridgelab::csv {

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

/// Strict parse of a whole field; throws std::invalid_argument on junk.
double parse_double(std::string_view text);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    bool operator==(const Table&) const = default;
};

/// Serializes to UTF-8 text: optional comment lines ("# ..."), a header row,
/// then one row per record, comma separated, LF endings.
std::string to_text(const Table& table, const std::vector<std::string>& comments = {});

/// Inverse of to_text; comment lines are returned through `comments` if given.
Table from_text(std::string_view text, std::vector<std::string>* comments = nullptr);

/// Writes `table` to `path`. Every row must have one value per column.
/// Failures are reported as std::runtime_error naming the path.
void emit_csv(const Table& table, const std::string& path,
              const std::vector<std::string>& comments = {});

Table read_csv(const std::string& path, std::vector<std::string>* comments = nullptr);

/// Whole-file helpers shared by the artifact writers.
void write_text_file(const std::string& path, std::string_view contents);
std::string read_text_file(const std::string& path);

}  // namespace bridgelab::csv
