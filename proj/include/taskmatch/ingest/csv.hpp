#ifndef TASKMATCH_INGEST_CSV_HPP
#define TASKMATCH_INGEST_CSV_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace taskmatch {

/// Malformed input data. `line()` is the 1-based line of the offending row
/// (the header is line 1), or 0 when no single row is at fault.
class DataError : public std::runtime_error {
public:
    DataError(const std::string& message, std::size_t line);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct UserTagRecord {
    std::string user;
    std::string tag;
    std::int64_t answers = 0;
    std::int64_t accepted = 0;
    std::size_t line = 0;
};

struct QuestionTagRecord {
    std::string question;
    std::vector<std::string> tags;
    std::size_t line = 0;
};

/// Header `user,tag,answers,accepted`.
std::vector<UserTagRecord> read_user_tags(std::istream& in);
std::vector<UserTagRecord> read_user_tags(const std::filesystem::path& path);

/// Header `question,tags`, tags separated by '|'.
std::vector<QuestionTagRecord> read_question_tags(std::istream& in);
std::vector<QuestionTagRecord> read_question_tags(const std::filesystem::path& path);

/// Splits one CSV line. Double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace taskmatch

#endif
