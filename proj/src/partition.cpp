#include "termtopics/partition.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>

#include "termtopics/errors.hpp"
#include "termtopics/graph.hpp"

namespace termtopics {

Partition Partition::from_labels(std::span<const int> labels) {
    Partition p;
    p.membership_.resize(labels.size());
    std::unordered_map<int, int> relabel;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0) {
            throw ValidationError("negative community label");
        }
        auto [it, inserted] = relabel.try_emplace(labels[i], p.count_);
        if (inserted) {
            ++p.count_;
        }
        p.membership_[i] = it->second;
    }
    return p;
}

Partition Partition::from_dense(std::vector<int> labels) {
    Partition p;
    std::vector<bool> used;
    for (int c : labels) {
        if (c < 0) {
            throw ValidationError("negative community label");
        }
        if (static_cast<std::size_t>(c) >= used.size()) {
            used.resize(static_cast<std::size_t>(c) + 1, false);
        }
        used[static_cast<std::size_t>(c)] = true;
    }
    if (std::find(used.begin(), used.end(), false) != used.end()) {
        throw ValidationError("community labels are not dense");
    }
    p.count_ = static_cast<int>(used.size());
    p.membership_ = std::move(labels);
    return p;
}

Partition Partition::by_size(std::span<const int> labels) {
    Partition dense = from_labels(labels);
    // First appearance order already ranks ties by smallest vertex.
    std::vector<std::size_t> sizes = dense.community_sizes();
    std::vector<int> order(static_cast<std::size_t>(dense.count_));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return sizes[static_cast<std::size_t>(a)] > sizes[static_cast<std::size_t>(b)];
    });
    std::vector<int> rank(order.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        rank[static_cast<std::size_t>(order[r])] = static_cast<int>(r);
    }
    for (int& c : dense.membership_) {
        c = rank[static_cast<std::size_t>(c)];
    }
    return dense;
}

Partition Partition::singletons(Eigen::Index n) {
    std::vector<int> labels(static_cast<std::size_t>(n));
    std::iota(labels.begin(), labels.end(), 0);
    return from_labels(labels);
}

Partition Partition::whole(Eigen::Index n) {
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    return from_labels(labels);
}

std::vector<std::vector<Eigen::Index>> Partition::communities() const {
    std::vector<std::vector<Eigen::Index>> out(static_cast<std::size_t>(count_));
    for (std::size_t v = 0; v < membership_.size(); ++v) {
        out[static_cast<std::size_t>(membership_[v])].push_back(static_cast<Eigen::Index>(v));
    }
    return out;
}

std::vector<std::size_t> Partition::community_sizes() const {
    std::vector<std::size_t> out(static_cast<std::size_t>(count_), 0);
    for (int c : membership_) {
        ++out[static_cast<std::size_t>(c)];
    }
    return out;
}

namespace {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace

void write_partition(std::ostream& out, const TermNetwork& net, const PartitionRecord& record) {
    if (record.partition.size() != net.vertex_count()) {
        throw Error("partition size does not match the network");
    }
    out << "# gamma=" << format_double(record.gamma) << '\n'
        << "# seed=" << record.seed << '\n'
        << "# quality=" << format_double(record.quality) << '\n'
        << "# community_count=" << record.partition.community_count() << '\n';
    for (Eigen::Index v = 0; v < net.vertex_count(); ++v) {
        out << net.term(v) << '\t' << record.partition.community(v) << '\n';
    }
}

PartitionRecord read_partition(std::istream& in, const TermNetwork& net) {
    PartitionRecord record;
    std::vector<int> labels(static_cast<std::size_t>(net.vertex_count()), -1);
    int declared_count = -1;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                continue;
            }
            std::string key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            const std::string value = line.substr(eq + 1);
            try {
                if (key == "gamma") {
                    record.gamma = std::stod(value);
                } else if (key == "seed") {
                    record.seed = std::stoull(value);
                } else if (key == "quality") {
                    record.quality = std::stod(value);
                } else if (key == "community_count") {
                    declared_count = std::stoi(value);
                }
            } catch (const std::exception&) {
                throw IngestError(line_no, "bad partition header value '" + value + "'");
            }
            continue;
        }
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos) {
            throw IngestError(line_no, "expected 'term<TAB>community'");
        }
        int community = -1;
        const char* first = line.data() + tab + 1;
        const char* last = line.data() + line.size();
        auto [ptr, ec] = std::from_chars(first, last, community);
        if (ec != std::errc{} || ptr != last || community < 0) {
            throw IngestError(line_no, "bad community index");
        }
        const Eigen::Index v = net.index_of(line.substr(0, tab));
        if (labels[static_cast<std::size_t>(v)] != -1) {
            throw IngestError(line_no, "vertex listed twice");
        }
        labels[static_cast<std::size_t>(v)] = community;
    }
    if (std::find(labels.begin(), labels.end(), -1) != labels.end()) {
        throw ValidationError("partition file does not cover every vertex");
    }
    record.partition = Partition::from_dense(std::move(labels));
    if (declared_count >= 0 && declared_count != record.partition.community_count()) {
        throw ValidationError("community_count header disagrees with the listed assignments");
    }
    return record;
}

} // namespace termtopics
