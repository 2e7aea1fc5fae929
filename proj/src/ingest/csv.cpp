#include "taskmatch/ingest/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>

namespace taskmatch {

DataError::DataError(const std::string& message, std::size_t line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::int64_t parse_count(const std::string& field, const char* name, std::size_t line) {
    std::int64_t v = 0;
    const char* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (ec != std::errc() || ptr != end || field.empty()) {
        throw DataError(std::string("column '") + name + "' is not an integer: '" + field + "'",
                        line);
    }
    if (v < 0) {
        throw DataError(std::string("column '") + name + "' is negative", line);
    }
    return v;
}

/// Reads data rows after checking the header; calls `row` with the split
/// fields and line number. Blank lines are skipped.
template <typename F>
void for_each_row(std::istream& in, const std::vector<std::string>& header, F&& row) {
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) {
            continue;
        }
        auto fields = split_csv_line(line);
        for (auto& f : fields) {
            f = trim(f);
        }
        if (!have_header) {
            if (fields != header) {
                std::string want;
                for (const auto& h : header) {
                    want += (want.empty() ? "" : ",") + h;
                }
                throw DataError("expected header '" + want + "'", lineno);
            }
            have_header = true;
            continue;
        }
        if (fields.size() != header.size()) {
            throw DataError("expected " + std::to_string(header.size()) + " fields, found " +
                                std::to_string(fields.size()),
                            lineno);
        }
        row(fields, lineno);
    }
    if (!have_header) {
        throw DataError("missing header row", 0);
    }
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path.string() + "'");
    }
    return in;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

std::vector<UserTagRecord> read_user_tags(std::istream& in) {
    std::vector<UserTagRecord> out;
    for_each_row(in, {"user", "tag", "answers", "accepted"},
                 [&](const std::vector<std::string>& f, std::size_t line) {
                     UserTagRecord r;
                     r.user = f[0];
                     r.tag = f[1];
                     if (r.user.empty() || r.tag.empty()) {
                         throw DataError("empty user or tag", line);
                     }
                     r.answers = parse_count(f[2], "answers", line);
                     r.accepted = parse_count(f[3], "accepted", line);
                     r.line = line;
                     out.push_back(std::move(r));
                 });
    return out;
}

std::vector<UserTagRecord> read_user_tags(const std::filesystem::path& path) {
    auto in = open(path);
    return read_user_tags(in);
}

std::vector<QuestionTagRecord> read_question_tags(std::istream& in) {
    std::vector<QuestionTagRecord> out;
    for_each_row(in, {"question", "tags"},
                 [&](const std::vector<std::string>& f, std::size_t line) {
                     QuestionTagRecord r;
                     r.question = f[0];
                     std::size_t start = 0;
                     while (start <= f[1].size()) {
                         auto bar = f[1].find('|', start);
                         if (bar == std::string::npos) {
                             bar = f[1].size();
                         }
                         std::string tag = trim(f[1].substr(start, bar - start));
                         if (!tag.empty()) {
                             r.tags.push_back(std::move(tag));
                         }
                         start = bar + 1;
                     }
                     if (r.tags.empty()) {
                         throw DataError("question has no tags", line);
                     }
                     r.line = line;
                     out.push_back(std::move(r));
                 });
    return out;
}

std::vector<QuestionTagRecord> read_question_tags(const std::filesystem::path& path) {
    auto in = open(path);
    return read_question_tags(in);
}

}  // namespace taskmatch
