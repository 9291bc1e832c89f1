#pragma once

#include <string>
#include <vector>

namespace ca::csv {

// Minimal CSV with RFC-4180 quoting. Canonical output: fields quoted only
// when they contain a comma, quote, or newline; "\n" row terminators; no
// trailing newline variance (always one final "\n").

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

std::string escape(const std::string& field);
std::string join_row(const std::vector<std::string>& fields);

Table parse(const std::string& text);
std::string serialize(const Table& table);

Table read_file(const std::string& path);
void write_file(const std::string& path, const Table& table);

}  // namespace ca::csv
