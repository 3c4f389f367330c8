#include "rqkd/transcript.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace rqkd {

namespace {

constexpr std::array<std::pair<MessageKind, std::string_view>, 13> kKindNames{{
    {MessageKind::ack_received, "ack_received"},
    {MessageKind::publish_l, "publish_l"},
    {MessageKind::publish_b, "publish_b"},
    {MessageKind::publish_k, "publish_k"},
    {MessageKind::publish_class, "publish_class"},
    {MessageKind::check_positions, "check_positions"},
    {MessageKind::check_bases, "check_bases"},
    {MessageKind::check_values, "check_values"},
    {MessageKind::abort, "abort"},
    {MessageKind::proceed, "proceed"},
    {MessageKind::charlie_mask_reveal, "charlie_mask_reveal"},
    {MessageKind::pair_lost, "pair_lost"},
    {MessageKind::pair_retransmitted, "pair_retransmitted"},
}};

}  // namespace

std::string_view to_string(MessageKind kind) {
    for (const auto& [k, name] : kKindNames)
        if (k == kind) return name;
    throw std::logic_error("unnamed message kind");
}

MessageKind parse_message_kind(std::string_view text) {
    for (const auto& [k, name] : kKindNames)
        if (name == text) return k;
    throw std::invalid_argument("unknown message kind '" + std::string(text) + "'");
}

std::string format_message(const ClassicalMessage& m) {
    std::string out = m.sender + ' ' + m.recipient + ' ' + std::string(to_string(m.kind)) + ' ';
    if (m.payload.empty()) return out + '-';
    for (std::size_t i = 0; i < m.payload.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(m.payload[i]);
    }
    return out;
}

ClassicalMessage parse_message(std::string_view line) {
    std::istringstream in{std::string(line)};
    std::string sender, recipient, kind, payload;
    if (!(in >> sender >> recipient >> kind >> payload)) {
        throw std::invalid_argument("malformed transcript line: " + std::string(line));
    }
    ClassicalMessage m{sender, recipient, parse_message_kind(kind), {}};
    if (payload == "-") return m;
    std::size_t start = 0;
    while (start <= payload.size()) {
        const std::size_t end = std::min(payload.find(',', start), payload.size());
        int value = 0;
        const auto [ptr, ec] = std::from_chars(payload.data() + start, payload.data() + end, value);
        if (ec != std::errc{} || ptr != payload.data() + end) {
            throw std::invalid_argument("malformed payload in transcript line: " + std::string(line));
        }
        m.payload.push_back(value);
        start = end + 1;
    }
    return m;
}

void Transcript::append(std::string sender, std::string recipient, MessageKind kind, std::vector<int> payload) {
    messages_.push_back({std::move(sender), std::move(recipient), kind, std::move(payload)});
}

std::size_t Transcript::count(MessageKind kind) const {
    std::size_t n = 0;
    for (const auto& m : messages_) n += m.kind == kind ? 1 : 0;
    return n;
}

const std::vector<int>& Transcript::read(MessageKind kind, std::string_view sender) const {
    for (auto it = messages_.rbegin(); it != messages_.rend(); ++it) {
        if (it->kind == kind && it->sender == sender) return it->payload;
    }
    throw std::logic_error(std::string(to_string(kind)) + " from " + std::string(sender) + " has not been published");
}

void Transcript::write(std::ostream& out) const {
    for (const auto& m : messages_) out << format_message(m) << '\n';
}

Transcript Transcript::parse(std::istream& in) {
    Transcript t;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        t.messages_.push_back(parse_message(line));
    }
    return t;
}

double match_rate(const std::vector<int>& a, const std::vector<int>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    if (n == 0) return 0.0;
    std::size_t same = 0;
    for (std::size_t i = 0; i < n; ++i) same += a[i] == b[i] ? 1 : 0;
    return static_cast<double>(same) / static_cast<double>(n);
}

}  // namespace rqkd
