#pragma once

#include <optional>
#include <string>

namespace qtrees::formats {

enum class Kind { Gog, Tree, Cx2, Npat, Pat, Pts };

std::optional<Kind> kind_from_path(const std::string& path);
std::string kind_name(Kind k);

std::string load_file(const std::string& path);
void save_file(const std::string& path, const std::string& content);

} // namespace qtrees::formats
