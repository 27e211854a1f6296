#include "treelocal/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace treelocal {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

csv_writer::csv_writer(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("csv_writer: cannot open " + path);
}

void csv_writer::meta_line(const std::string& key, const std::string& value) {
    out_ << "# " << key << ": " << value << "\n";
}

void csv_writer::header(const std::vector<std::string>& cols) { row(cols); }

void csv_writer::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << "\n";
}

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_json: cannot open " + path);
    out << j.dump(2) << "\n";
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_json: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

}  // namespace treelocal
