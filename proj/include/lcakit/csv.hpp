#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lcakit/errors.hpp"

namespace lcakit {

// Shortest round-trip decimal form. Guarantees byte-identical output for
// identical doubles, which the determinism contract depends on.
inline std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// CSV dialect: comma separator, '.' decimal point, LF endings, UTF-8,
// mandatory header row. Metadata lines are '#'-prefixed and precede the
// header.
class CsvWriter {
public:
    void add_metadata(const std::string& key, const std::string& value) {
        metadata_.emplace_back(key, value);
    }

    void set_header(std::vector<std::string> columns) { header_ = std::move(columns); }

    void add_row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

    std::string str() const {
        std::ostringstream out;
        for (const auto& [k, v] : metadata_)
            out << "# " << k << ": " << v << "\n";
        out << join(header_) << "\n";
        for (const auto& row : rows_)
            out << join(row) << "\n";
        return out.str();
    }

    void write(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw Error(ErrorCode::Usage, "cannot open output file '" + path + "'");
        f << str();
    }

private:
    static std::string escape(const std::string& cell) {
        if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
        std::string out = "\"";
        for (char c : cell) {
            if (c == '"') out += '"';
            out += c;
        }
        out += '"';
        return out;
    }

    static std::string join(const std::vector<std::string>& cells) {
        std::string out;
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += escape(cells[i]);
        }
        return out;
    }

    std::vector<std::pair<std::string, std::string>> metadata_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace lcakit
