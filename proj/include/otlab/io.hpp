#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace otlab {

// Shortest-width fixed formatting ("%.17g"): round-trips doubles and keeps
// repeated runs byte-identical.
std::string fmt_g17(double v);

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows);

// Creates parent directories as needed.
void write_text_file(const std::string& path, const std::string& content);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Ordered keys, 2-space indent, trailing newline.
void write_json(const std::string& path, const nlohmann::ordered_json& j);

}  // namespace otlab
