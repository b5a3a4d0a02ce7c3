#include "twc/bridge/journal.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "twc/common/errors.hpp"

namespace twc::bridge {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && s.front() == ' ')
        s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ')
        s.remove_suffix(1);
    return s;
}

/// Splits off the text before the next " | " separator.
std::string_view field(std::string_view& rest, std::string_view line)
{
    auto pos = rest.find(" | ");
    if (pos == std::string_view::npos)
        throw DecodeError("journal line has too few fields: " + std::string(line));
    auto out = rest.substr(0, pos);
    rest.remove_prefix(pos + 3);
    return trim(out);
}

} // namespace

std::string JournalEntry::line() const
{
    return std::to_string(tick) + " | " + transfer + " | " + from + " -> " + to + " | " + detail;
}

JournalEntry JournalEntry::parse(std::string_view line)
{
    JournalEntry e;
    std::string_view rest = line;
    auto tick = field(rest, line);
    auto [p, ec] = std::from_chars(tick.data(), tick.data() + tick.size(), e.tick);
    if (ec != std::errc{} || p != tick.data() + tick.size())
        throw DecodeError("bad journal tick: " + std::string(line));
    e.transfer = std::string(field(rest, line));
    auto states = field(rest, line);
    auto arrow = states.find(" -> ");
    if (arrow == std::string_view::npos)
        throw DecodeError("journal line lacks a transition: " + std::string(line));
    e.from = std::string(trim(states.substr(0, arrow)));
    e.to = std::string(trim(states.substr(arrow + 4)));
    e.detail = std::string(rest);
    if (e.transfer.empty() || e.from.empty() || e.to.empty())
        throw DecodeError("empty journal field: " + std::string(line));
    return e;
}

void write_journal(std::ostream& out, const std::vector<JournalEntry>& entries)
{
    for (const auto& e : entries)
        out << e.line() << '\n';
}

std::vector<JournalEntry> read_journal(std::istream& in)
{
    std::vector<JournalEntry> out;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty())
            out.push_back(JournalEntry::parse(line));
    return out;
}

} // namespace twc::bridge
