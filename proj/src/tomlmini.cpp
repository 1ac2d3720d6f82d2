#include "traitlab/tomlmini.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <vector>

#include "traitlab/textutil.hpp"

namespace traitlab {

namespace {

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line_no) + ": " + what);
}

bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

/// Strips a trailing comment, respecting quoted strings.
std::string strip_comment(const std::string& line) {
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_string) {
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') in_string = true;
        if (c == '#') return line.substr(0, i);
    }
    return line;
}

std::string parse_basic_string(const std::string& text, std::size_t& pos, std::size_t line_no) {
    std::string out;
    ++pos;  // opening quote
    while (pos < text.size()) {
        const char c = text[pos];
        if (c == '"') {
            ++pos;
            return out;
        }
        if (c == '\\') {
            ++pos;
            if (pos >= text.size()) fail(line_no, "dangling escape in string");
            switch (text[pos]) {
                case '"': out.push_back('"'); break;
                case '\\': out.push_back('\\'); break;
                case 'n': out.push_back('\n'); break;
                case 't': out.push_back('\t'); break;
                case 'r': out.push_back('\r'); break;
                default: fail(line_no, std::string("unsupported escape \\") + text[pos]);
            }
            ++pos;
            continue;
        }
        out.push_back(c);
        ++pos;
    }
    fail(line_no, "unterminated string");
}

nlohmann::ordered_json parse_scalar(const std::string& text, std::size_t line_no) {
    const std::string value = trim(text);
    if (value.empty()) fail(line_no, "missing value");
    if (value == "true") return true;
    if (value == "false") return false;
    if (value.front() == '"') {
        std::size_t pos = 0;
        const std::string parsed = parse_basic_string(value, pos, line_no);
        if (pos != value.size()) fail(line_no, "trailing characters after string");
        return parsed;
    }
    if (value.front() == '\'') fail(line_no, "literal strings are not supported; use \"...\"");

    // Numeric: integer when it parses whole without '.', 'e', or 'E'.
    const bool looks_float = value.find_first_of(".eE") != std::string::npos;
    try {
        std::size_t consumed = 0;
        if (!looks_float) {
            const long long parsed = std::stoll(value, &consumed);
            if (consumed == value.size()) return parsed;
        } else {
            const double parsed = std::stod(value, &consumed);
            if (consumed == value.size()) return parsed;
        }
    } catch (const std::exception&) {
        // fall through to the error below
    }
    fail(line_no, "cannot parse value: " + value);
}

nlohmann::ordered_json parse_value(const std::string& text, std::size_t line_no) {
    const std::string value = trim(text);
    if (value.empty()) fail(line_no, "missing value");
    if (value.front() != '[') return parse_scalar(value, line_no);

    if (value.back() != ']') fail(line_no, "arrays must close on the same line");
    nlohmann::ordered_json array = nlohmann::ordered_json::array();
    const std::string inner = value.substr(1, value.size() - 2);

    // Split on commas outside quotes.
    std::vector<std::string> parts;
    std::string current;
    bool in_string = false;
    bool escaped = false;
    for (const char c : inner) {
        if (in_string) {
            current.push_back(c);
            if (escaped) {
                escaped = false;
            } else if (c == '\\') {
                escaped = true;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
            current.push_back(c);
            continue;
        }
        if (c == ',') {
            parts.push_back(current);
            current.clear();
            continue;
        }
        if (c == '[') fail(line_no, "nested arrays are not supported");
        current.push_back(c);
    }
    if (in_string) fail(line_no, "unterminated string in array");
    parts.push_back(current);

    for (const auto& part : parts) {
        if (trim(part).empty()) {
            if (parts.size() == 1) return array;  // []
            fail(line_no, "empty array element");
        }
        array.push_back(parse_scalar(part, line_no));
    }
    return array;
}

std::vector<std::string> parse_key_path(const std::string& text, std::size_t line_no) {
    std::vector<std::string> path;
    std::string current;
    for (const char c : text) {
        if (c == '.') {
            if (current.empty()) fail(line_no, "empty key segment");
            path.push_back(current);
            current.clear();
            continue;
        }
        if (!is_bare_key_char(c)) {
            fail(line_no, std::string("unsupported character in key: '") + c + "'");
        }
        current.push_back(c);
    }
    if (current.empty()) fail(line_no, "empty key segment");
    path.push_back(current);
    return path;
}

}  // namespace

nlohmann::ordered_json parse_toml(const std::string& content) {
    nlohmann::ordered_json root = nlohmann::ordered_json::object();
    nlohmann::ordered_json* table = &root;

    std::istringstream in(content);
    std::string raw_line;
    std::size_t line_no = 0;
    while (std::getline(in, raw_line)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw_line));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.size() >= 2 && line[1] == '[') {
                fail(line_no, "[[array-of-tables]] is not supported");
            }
            if (line.back() != ']') fail(line_no, "unterminated table header");
            const auto path = parse_key_path(trim(line.substr(1, line.size() - 2)), line_no);
            table = &root;
            for (std::size_t i = 0; i < path.size(); ++i) {
                const bool last = i + 1 == path.size();
                auto& slot = (*table)[path[i]];
                if (slot.is_null()) {
                    slot = nlohmann::ordered_json::object();
                } else if (last) {
                    fail(line_no, "duplicate table [" + trim(line.substr(1, line.size() - 2)) +
                                      "]");
                } else if (!slot.is_object()) {
                    fail(line_no, "key '" + path[i] + "' is not a table");
                }
                table = &slot;
            }
            continue;
        }

        const std::size_t eq = [&] {
            bool in_string = false;
            for (std::size_t i = 0; i < line.size(); ++i) {
                if (line[i] == '"') in_string = !in_string;
                if (line[i] == '=' && !in_string) return i;
            }
            return std::string::npos;
        }();
        if (eq == std::string::npos) fail(line_no, "expected key = value");

        const std::string key_text = trim(line.substr(0, eq));
        if (key_text.empty()) fail(line_no, "missing key");
        if (key_text.front() == '"') fail(line_no, "quoted keys are not supported");
        const auto path = parse_key_path(key_text, line_no);

        nlohmann::ordered_json* target = table;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            auto& slot = (*target)[path[i]];
            if (slot.is_null()) {
                slot = nlohmann::ordered_json::object();
            } else if (!slot.is_object()) {
                fail(line_no, "key '" + path[i] + "' is not a table");
            }
            target = &slot;
        }
        if (target->contains(path.back())) fail(line_no, "duplicate key '" + path.back() + "'");
        (*target)[path.back()] = parse_value(line.substr(eq + 1), line_no);
    }
    return root;
}

nlohmann::ordered_json parse_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_toml(buffer.str());
}

}  // namespace traitlab
