#include "common/csv.hpp"

#include "common/error.hpp"
#include "common/fsio.hpp"

namespace ca::csv {

int Table::column(const std::string& name) const {
    for (size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

std::string escape(const std::string& field) {
    bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string join_row(const std::vector<std::string>& fields) {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += escape(fields[i]);
    }
    out.push_back('\n');
    return out;
}

namespace {

std::vector<std::string> parse_row(const std::string& text, size_t& pos) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    while (pos < text.size()) {
        char c = text[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    cur.push_back('"');
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c == '\n') {
            ++pos;
            fields.push_back(std::move(cur));
            return fields;
        } else if (c != '\r') {
            cur.push_back(c);
        }
        ++pos;
    }
    fields.push_back(std::move(cur));
    return fields;
}

}  // namespace

Table parse(const std::string& text) {
    Table t;
    size_t pos = 0;
    if (text.empty()) return t;
    t.header = parse_row(text, pos);
    while (pos < text.size()) {
        auto row = parse_row(text, pos);
        if (row.size() == 1 && row[0].empty()) continue;  // blank line
        if (row.size() != t.header.size()) {
            throw Error(ErrorKind::Parse, "csv row has " + std::to_string(row.size()) +
                                              " fields, header has " + std::to_string(t.header.size()));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string serialize(const Table& table) {
    std::string out = join_row(table.header);
    for (const auto& row : table.rows) out += join_row(row);
    return out;
}

Table read_file(const std::string& path) {
    return parse(fsio::read_text(path));
}

void write_file(const std::string& path, const Table& table) {
    fsio::write_text(path, serialize(table));
}

}  // namespace ca::csv
