#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace treelocal {

// Round-trip-exact decimal rendering; CSV cells use this for every double so
// outputs are byte-stable across runs and worker counts.
std::string format_double(double v);

class csv_writer {
  public:
    explicit csv_writer(const std::string& path);

    void meta_line(const std::string& key, const std::string& value);
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<std::string>& cells);

  private:
    std::ofstream out_;
};

void write_json(const std::string& path, const nlohmann::json& j);

nlohmann::json read_json(const std::string& path);

}  // namespace treelocal
