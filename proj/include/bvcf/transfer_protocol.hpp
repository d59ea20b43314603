#pragma once

#include <bvcf/core_model.hpp>
#include <bvcf/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace bvcf {

/// @brief Lossy channel parameters for the cloudlet transfer protocol.
///
/// Per-transfer latency is not stored here: it is network_delay + length / bandwidth
/// of the receiving VM's link.
struct ChannelConfig {
    double loss_probability{0.0};
    SimTime unit_time{1.0}; ///< wait before retransmitting a lost cloudlet
    std::optional<std::uint32_t> max_retries{100}; ///< nullopt means unlimited
    std::size_t batch_size{10};
    /// Scripted outcomes consumed before the random draws start; true loses the frame.
    std::vector<bool> loss_script;

    bool operator==(const ChannelConfig&) const = default;

    void validate(const std::string& field = "channel") const {
        if (!std::isfinite(loss_probability) || loss_probability < 0.0 || loss_probability > 1.0) {
            throw ValidationError(field + ".loss_probability", "outside [0,1]");
        }
        if (!std::isfinite(unit_time) || unit_time <= 0.0) {
            throw ValidationError(field + ".unit_time", "must be positive");
        }
        if (max_retries && *max_retries == 0) {
            throw ValidationError(field + ".max_retries", "must be positive");
        }
        if (batch_size == 0) {
            throw ValidationError(field + ".batch_size", "must be positive");
        }
    }
};

/// @brief Seeded Bernoulli loss source, optionally preceded by a fixed script.
///
/// One instance per run; every loss decision of the run is drawn from it in
/// event order.
class LossChannel {
public:
    LossChannel(double loss_probability, std::uint64_t seed, std::vector<bool> script = {})
        : rng_(seed), loss_(loss_probability), script_(std::move(script)) {}

    /// @return true if the next transmission is lost.
    bool next_lost() {
        if (pos_ < script_.size()) {
            return script_[pos_++];
        }
        return loss_(rng_);
    }

private:
    std::mt19937_64 rng_;
    std::bernoulli_distribution loss_;
    std::vector<bool> script_;
    std::size_t pos_{0};
};

[[nodiscard]] inline SimTime transfer_latency(const LinkMetrics& link, Mi length) {
    return link.network_delay + static_cast<double>(length) / link.bandwidth;
}

/// Sorted, duplicate-free cloudlet IDs the VM expects to receive.
struct PredictedSequenceList {
    std::vector<CloudletId> ids;

    [[nodiscard]] bool contains(CloudletId id) const { return std::binary_search(ids.begin(), ids.end(), id); }
    [[nodiscard]] std::size_t size() const noexcept { return ids.size(); }
    bool operator==(const PredictedSequenceList&) const = default;
};

inline PredictedSequenceList send_id_list(std::span<const Cloudlet> cloudlets) {
    if (cloudlets.empty()) {
        throw EmptyBatch{};
    }
    PredictedSequenceList list;
    list.ids.reserve(cloudlets.size());
    for (const auto& c : cloudlets) {
        list.ids.push_back(c.id);
    }
    std::sort(list.ids.begin(), list.ids.end());
    list.ids.erase(std::unique(list.ids.begin(), list.ids.end()), list.ids.end());
    return list;
}

/// Receiver and sender bookkeeping for one batch.
struct TransferState {
    PredictedSequenceList predicted;
    std::set<CloudletId> received;
    std::map<CloudletId, std::uint32_t> attempts;
    std::size_t batch_size{10};

    [[nodiscard]] std::uint32_t attempts_of(CloudletId id) const {
        auto it = attempts.find(id);
        return it == attempts.end() ? 0 : it->second;
    }
    /// attempts - 1, or 0 before the first attempt.
    [[nodiscard]] std::uint32_t retransmit_counter(CloudletId id) const {
        const auto a = attempts_of(id);
        return a == 0 ? 0 : a - 1;
    }
    [[nodiscard]] bool complete() const noexcept { return received.size() == predicted.size(); }
};

struct TransferOutcome {
    enum class Kind { delivered, lost };
    Kind kind{Kind::lost};
    SimTime at{0.0}; ///< arrival time when delivered, send time when lost

    [[nodiscard]] bool delivered() const noexcept { return kind == Kind::delivered; }
};

/// @brief One send attempt of `cloudlet` towards a VM over `link`.
///
/// `lost` is the loss decision already drawn by the caller. The attempt is
/// counted either way.
inline TransferOutcome transmit_cloudlet(TransferState& state, const Cloudlet& cloudlet, const LinkMetrics& link,
                                         SimTime now, bool lost) {
    if (!state.predicted.contains(cloudlet.id)) {
        throw UnexpectedCloudlet(cloudlet.id);
    }
    ++state.attempts[cloudlet.id];
    if (lost) {
        return {TransferOutcome::Kind::lost, now};
    }
    return {TransferOutcome::Kind::delivered, now + transfer_latency(link, cloudlet.length)};
}

/// True while another attempt for `id` stays within max_retries.
[[nodiscard]] inline bool retry_allowed(const TransferState& state, CloudletId id, const ChannelConfig& ch) {
    return !ch.max_retries || state.attempts_of(id) <= *ch.max_retries;
}

struct Response {
    enum class Kind { ack, retransmit_request };
    Kind kind{Kind::ack};
    CloudletId id{0};

    bool operator==(const Response&) const = default;
};

/// VM side: match the frame against the predicted list. Duplicates are re-acked.
inline Response receive_cloudlet(TransferState& state, const Cloudlet& frame) {
    if (!state.predicted.contains(frame.id)) {
        return {Response::Kind::retransmit_request, frame.id};
    }
    state.received.insert(frame.id);
    return {Response::Kind::ack, frame.id};
}

struct TransferStats {
    std::uint64_t attempts{0};
    std::uint64_t retransmissions{0};
    SimTime completion_time{0.0};
};

struct DeliveredCloudlet {
    Cloudlet cloudlet;
    SimTime delivered_at{0.0};
};

struct BatchTransferResult {
    std::vector<DeliveredCloudlet> delivered; ///< in delivery order
    TransferStats stats;
    TransferState state;
};

/// @brief Stop-and-wait transfer of one batch, outside the event loop.
///
/// Cloudlets go out in predicted (ascending id) order; each one is resent
/// every unit_time until a frame gets through. Throws RetryLimitExceeded.
inline BatchTransferResult run_batch_transfer(std::span<const Cloudlet> batch, const LinkMetrics& link,
                                              const ChannelConfig& ch, SimTime now, LossChannel& channel) {
    if (batch.size() > ch.batch_size) {
        throw ValidationError("batch", "exceeds batch_size " + std::to_string(ch.batch_size));
    }
    BatchTransferResult result;
    result.state.predicted = send_id_list(batch);
    result.state.batch_size = ch.batch_size;

    std::map<CloudletId, const Cloudlet*> by_id;
    for (const auto& c : batch) {
        by_id.emplace(c.id, &c);
    }

    SimTime t = now;
    for (const CloudletId id : result.state.predicted.ids) {
        const Cloudlet& c = *by_id.at(id);
        for (;;) {
            const auto outcome = transmit_cloudlet(result.state, c, link, t, channel.next_lost());
            if (outcome.delivered()) {
                t = outcome.at;
                receive_cloudlet(result.state, c);
                Cloudlet copy = c;
                copy.status = CloudletStatus::delivered;
                result.delivered.push_back({copy, t});
                break;
            }
            if (!retry_allowed(result.state, id, ch)) {
                throw RetryLimitExceeded(id);
            }
            t += ch.unit_time;
        }
    }
    for (const auto& [id, a] : result.state.attempts) {
        result.stats.attempts += a;
        result.stats.retransmissions += a - 1;
    }
    result.stats.completion_time = t;
    return result;
}

} // namespace bvcf
