#pragma once

// Classical side of a session: the ordered public message log and the
// session result.
//
// Serialized transcript format, one message per line:
//
//     <sender> <recipient> <kind> <payload>
//
// where payload is a comma-separated list of integers, or "-" when empty.
// Parties are lower-case names ("alice", "bob", "charlie", "e1", ...);
// "all" as recipient marks a public announcement.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace rqkd {

enum class MessageKind {
    ack_received,
    publish_l,
    publish_b,
    publish_k,
    publish_class,
    check_positions,
    check_bases,
    check_values,
    abort,
    proceed,
    charlie_mask_reveal,
    pair_lost,
    pair_retransmitted,
};

std::string_view to_string(MessageKind kind);
MessageKind parse_message_kind(std::string_view text);

struct ClassicalMessage {
    std::string sender;
    std::string recipient;
    MessageKind kind;
    std::vector<int> payload;

    bool operator==(const ClassicalMessage&) const = default;
};

std::string format_message(const ClassicalMessage& message);
ClassicalMessage parse_message(std::string_view line);

class Transcript {
public:
    void append(std::string sender, std::string recipient, MessageKind kind, std::vector<int> payload = {});

    const std::vector<ClassicalMessage>& messages() const { return messages_; }
    std::size_t size() const { return messages_.size(); }
    std::size_t count(MessageKind kind) const;

    // Payload of the most recent `kind` message from `sender`; throws if the
    // message has not been published yet. Receivers read published data
    // through this, never from the sender's local variables.
    const std::vector<int>& read(MessageKind kind, std::string_view sender) const;

    void write(std::ostream& out) const;
    static Transcript parse(std::istream& in);

    bool operator==(const Transcript&) const = default;

private:
    std::vector<ClassicalMessage> messages_;
};

struct KeyResult {
    int d = 2;
    double abort_threshold = 0.0;
    bool aborted = false;
    // Raw keys. They are filled even when the session aborts so that the
    // attack statistics can be computed; `aborted` means they must be discarded.
    std::vector<int> alice_key;
    std::vector<int> bob_key;
    // Eve's decoded digits at the key positions; empty when Eve holds nothing.
    std::vector<int> eve_key;
    double observed_error_rate = 0.0;
    std::size_t checked = 0;
    Transcript transcript;
    std::size_t recycled_pairs = 0;
    // Smallest fidelity of a recycled state with its canonical form (1 when none).
    double min_recycle_fidelity = 1.0;
    std::size_t retransmissions = 0;
    // Bob's decoded digit for every position of the session.
    std::vector<int> bob_digits;
};

// Fraction of positions where the two sequences agree; 0 for empty input.
double match_rate(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace rqkd
