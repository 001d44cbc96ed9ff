#include "qtrees/formats.hpp"

#include <fstream>
#include <sstream>

#include "qtrees/error.hpp"

namespace qtrees::formats {

std::optional<Kind> kind_from_path(const std::string& path) {
    auto dot = path.rfind('.');
    if (dot == std::string::npos) return std::nullopt;
    std::string ext = path.substr(dot + 1);
    if (ext == "gog") return Kind::Gog;
    if (ext == "tree") return Kind::Tree;
    if (ext == "cx2") return Kind::Cx2;
    if (ext == "npat") return Kind::Npat;
    if (ext == "pat") return Kind::Pat;
    if (ext == "pts") return Kind::Pts;
    return std::nullopt;
}

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::Gog: return "gog";
        case Kind::Tree: return "tree";
        case Kind::Cx2: return "cx2";
        case Kind::Npat: return "npat";
        case Kind::Pat: return "pat";
        case Kind::Pts: return "pts";
    }
    return "?";
}

std::string load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IO", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void save_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IO", "cannot write " + path);
    out << content;
}

} // namespace qtrees::formats
