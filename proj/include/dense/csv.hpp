#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dense {

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// RFC-4180 reader: quoted fields, doubled-quote escapes, commas and
/// newlines inside quotes, CRLF or LF line endings.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    /// Next record, or nullopt at end of input. Throws CsvError on an
    /// unterminated quoted field.
    std::optional<std::vector<std::string>> next_row();

private:
    std::istream& in_;
};

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_escape(const std::string& field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace dense
