#include <istream>
#include <iterator>
#include <ostream>

#include "bcc/column_io.hpp"
#include "bcc/error.hpp"

namespace bcc {

namespace {

// Offset of the first malformed UTF-8 sequence, or npos.
std::size_t find_invalid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + len > s.size()) return i;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (cc & 0x3F);
    }
    const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                          (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += len;
  }
  return std::string_view::npos;
}

}  // namespace

std::vector<std::string> read_csv_column(std::string_view text, std::size_t column_index,
                                         bool has_header) {
  if (auto bad = find_invalid_utf8(text); bad != std::string_view::npos) {
    throw error(errc::utf8_error, "malformed UTF-8 sequence", bad);
  }
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<std::string> column;
  std::vector<std::string> row;
  std::string field;
  std::size_t width = 0;
  std::size_t row_number = 0;
  bool first_row = true;

  auto end_row = [&] {
    ++row_number;
    if (first_row) {
      width = row.size();
      if (column_index >= width) {
        throw error(errc::column_index_out_of_range,
                    "column " + std::to_string(column_index) + " requested but rows have " +
                        std::to_string(width) + " fields");
      }
    } else if (row.size() != width) {
      throw error(errc::ragged_row, "row " + std::to_string(row_number) + " has " +
                                        std::to_string(row.size()) + " fields, expected " +
                                        std::to_string(width));
    }
    if (!(first_row && has_header)) column.push_back(std::move(row[column_index]));
    first_row = false;
    row.clear();
  };

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    // Blank line.
    if (text[i] == '\n' || text[i] == '\r') {
      i += (text[i] == '\r' && i + 1 < n && text[i + 1] == '\n') ? 2 : 1;
      continue;
    }
    // One record.
    while (true) {
      field.clear();
      if (i < n && text[i] == '"') {
        const std::size_t open = i++;
        while (true) {
          if (i >= n) throw error(errc::invalid_argument, "unterminated quoted field", open);
          if (text[i] == '"') {
            if (i + 1 < n && text[i + 1] == '"') {
              field += '"';
              i += 2;
            } else {
              ++i;
              break;
            }
          } else {
            field += text[i++];
          }
        }
        // Anything between the closing quote and the delimiter is kept verbatim.
        while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') field += text[i++];
      } else {
        while (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') field += text[i++];
      }
      row.push_back(field);
      if (i < n && text[i] == ',') {
        ++i;
        continue;
      }
      if (i < n) i += (text[i] == '\r' && i + 1 < n && text[i + 1] == '\n') ? 2 : 1;
      break;
    }
    end_row();
  }
  return column;
}

std::vector<std::string> read_csv_column(std::istream& source, std::size_t column_index,
                                         bool has_header) {
  std::string text{std::istreambuf_iterator<char>(source), std::istreambuf_iterator<char>()};
  if (source.bad()) throw error(errc::io_error, "read from CSV source failed");
  return read_csv_column(std::string_view{text}, column_index, has_header);
}

void write_csv_column(std::ostream& sink, std::span<const std::string> values) {
  for (const auto& v : values) {
    const bool quote = v.empty() || v.find_first_of(",\"\r\n") != std::string::npos;
    if (quote) {
      sink << '"';
      for (char c : v) {
        if (c == '"') sink << '"';
        sink << c;
      }
      sink << '"';
    } else {
      sink << v;
    }
    sink << '\n';
  }
  if (!sink) throw error(errc::io_error, "write to CSV sink failed");
}

}  // namespace bcc
