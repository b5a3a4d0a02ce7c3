#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twc::bridge {

/// One job transition: `tick | transferId | from -> to | detail`.
struct JournalEntry {
    std::uint64_t tick = 0;
    std::string transfer; ///< decimal transfer id, or "forge-N" for side jobs
    std::string from;
    std::string to;
    std::string detail;

    std::string line() const;
    /// Throws DecodeError on a malformed line.
    static JournalEntry parse(std::string_view line);

    friend bool operator==(const JournalEntry&, const JournalEntry&) = default;
};

void write_journal(std::ostream& out, const std::vector<JournalEntry>& entries);
std::vector<JournalEntry> read_journal(std::istream& in);

} // namespace twc::bridge
