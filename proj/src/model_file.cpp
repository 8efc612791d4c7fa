#include "fraclag/model_file.hpp"

#include <fstream>
#include <sstream>

#include "fraclag/parser.hpp"

namespace fraclag {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

}  // namespace

ModelFile parse_model_text(const std::string& text) {
    ModelFile model;
    bool has_n = false;
    bool has_lagrangian = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::InvalidModel,
                        "line " + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(stripped.substr(0, eq));
        std::string value = unquote(trim(stripped.substr(eq + 1)));
        if (key == "name") {
            model.name = value;
        } else if (key == "n") {
            try {
                model.n = std::stoi(value);
            } catch (const std::exception&) {
                throw Error(ErrorCode::InvalidModel, "n must be an integer, got '" + value + "'");
            }
            if (model.n < 1) throw Error(ErrorCode::InvalidModel, "n must be >= 1");
            has_n = true;
        } else if (key == "lagrangian") {
            model.lagrangianText = value;
            has_lagrangian = true;
        } else {
            model.extra[key] = value;
        }
    }
    if (!has_n) throw Error(ErrorCode::InvalidModel, "missing required key 'n'");
    if (!has_lagrangian) throw Error(ErrorCode::InvalidModel, "missing required key 'lagrangian'");
    model.lagrangian = parse(model.lagrangianText, model.n);
    return model;
}

ModelFile load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidModel, "cannot open model file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_text(buf.str());
}

}  // namespace fraclag
