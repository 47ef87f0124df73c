#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace seuvote {

inline constexpr int kMaxStates = 32;

using StateId = int;
using OutcomeId = int;

/// Subset of a state space, stored as a bitset over at most 32 states.
class Event {
public:
    constexpr Event() = default;
    constexpr explicit Event(std::uint32_t bits) : bits_(bits) {}
    Event(std::initializer_list<StateId> states) {
        for (StateId s : states) insert(s);
    }

    static constexpr Event singleton(StateId s) { return Event(std::uint32_t{1} << s); }
    static constexpr Event full(int n) {
        return Event(n >= 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1));
    }

    [[nodiscard]] constexpr std::uint32_t bits() const { return bits_; }
    [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }
    [[nodiscard]] constexpr int size() const { return std::popcount(bits_); }
    [[nodiscard]] constexpr bool contains(StateId s) const { return (bits_ >> s) & 1U; }
    [[nodiscard]] constexpr bool subset_of(Event o) const { return (bits_ & ~o.bits_) == 0; }
    [[nodiscard]] constexpr bool intersects(Event o) const { return (bits_ & o.bits_) != 0; }
    /// Lowest member, or -1 when empty.
    [[nodiscard]] constexpr StateId lowest() const { return bits_ ? std::countr_zero(bits_) : -1; }

    void insert(StateId s) {
        if (s < 0 || s >= kMaxStates) throw std::out_of_range("state index out of range");
        bits_ |= std::uint32_t{1} << s;
    }
    void erase(StateId s) { bits_ &= ~(std::uint32_t{1} << s); }

    [[nodiscard]] std::vector<StateId> members() const {
        std::vector<StateId> out;
        for (std::uint32_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
        return out;
    }

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (std::uint32_t b = bits_; b; b &= b - 1) fn(static_cast<StateId>(std::countr_zero(b)));
    }

    friend constexpr Event operator|(Event a, Event b) { return Event(a.bits_ | b.bits_); }
    friend constexpr Event operator&(Event a, Event b) { return Event(a.bits_ & b.bits_); }
    friend constexpr Event operator-(Event a, Event b) { return Event(a.bits_ & ~b.bits_); }
    Event& operator|=(Event o) { bits_ |= o.bits_; return *this; }
    Event& operator&=(Event o) { bits_ &= o.bits_; return *this; }

    friend constexpr bool operator==(Event, Event) = default;
    friend constexpr auto operator<=>(Event a, Event b) { return a.bits_ <=> b.bits_; }

private:
    std::uint32_t bits_ = 0;
};

/// Ordered list of distinct labels with a reverse index. Tag keeps state and
/// outcome spaces from being mixed up.
template <class Tag>
class LabelSpace {
public:
    LabelSpace() = default;
    explicit LabelSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            if (labels_[i].empty()) throw std::invalid_argument("empty label");
            if (!index_.emplace(labels_[i], static_cast<int>(i)).second)
                throw std::invalid_argument("duplicate label '" + labels_[i] + "'");
        }
    }

    [[nodiscard]] int size() const { return static_cast<int>(labels_.size()); }
    [[nodiscard]] const std::string& label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }
    [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
    /// Index of a label, or -1.
    [[nodiscard]] int find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        return it == index_.end() ? -1 : it->second;
    }
    [[nodiscard]] int index(std::string_view name) const {
        const int i = find(name);
        if (i < 0) throw std::invalid_argument("unknown label '" + std::string(name) + "'");
        return i;
    }

    friend bool operator==(const LabelSpace& a, const LabelSpace& b) { return a.labels_ == b.labels_; }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, int> index_;
};

struct StateTag {};
struct OutcomeTag {};

class StateSpace : public LabelSpace<StateTag> {
public:
    using LabelSpace::LabelSpace;
    explicit StateSpace(std::vector<std::string> labels) : LabelSpace(std::move(labels)) {
        if (size() > kMaxStates) throw std::invalid_argument("at most 32 states are supported");
    }
    [[nodiscard]] Event all() const { return Event::full(size()); }
    /// Renders an event as "{a,b}" in state order.
    [[nodiscard]] std::string format(Event e) const;
};

class OutcomeSpace : public LabelSpace<OutcomeTag> {
public:
    using LabelSpace::LabelSpace;
};

/// Generic "{0,1}" rendering with numeric state indices.
std::string format_event(Event e);

}  // namespace seuvote

template <>
struct std::hash<seuvote::Event> {
    std::size_t operator()(seuvote::Event e) const noexcept { return std::hash<std::uint32_t>{}(e.bits()); }
};
