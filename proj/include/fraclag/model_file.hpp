#pragma once

#include <map>
#include <string>

#include "fraclag/expr.hpp"

namespace fraclag {

// On-disk model description. Line-oriented `key = value` pairs, `#` comments,
// blank lines ignored. Required keys: `n` (coordinate count) and `lagrangian`
// (expression text, optionally double-quoted). `name` is optional; unknown
// keys are kept verbatim in `extra`.
struct ModelFile {
    std::string name;
    int n = 0;
    std::string lagrangianText;
    Expr lagrangian;
    std::map<std::string, std::string> extra;
};

ModelFile parse_model_text(const std::string& text);
ModelFile load_model_file(const std::string& path);

}  // namespace fraclag
