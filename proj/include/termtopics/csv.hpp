#ifndef TERMTOPICS_CSV_HPP
#define TERMTOPICS_CSV_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace termtopics {

/// RFC 4180 field: quoted (with doubled quotes) when it holds a comma, quote, CR or LF.
std::string csv_field(std::string_view value);

/// Writes one record terminated by CRLF.
void write_csv_row(std::ostream& out, std::span<const std::string> fields);

/// Parses RFC 4180 text (CRLF or LF records). Throws Error on an unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

} // namespace termtopics

#endif // TERMTOPICS_CSV_HPP
