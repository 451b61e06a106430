#include "termtopics/embeddings.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include "termtopics/errors.hpp"
#include "termtopics/preprocess.hpp"

namespace termtopics {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

bool is_integer(std::string_view s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

double parse_component(std::string_view s, std::size_t line) {
    // from_chars for double is not available on every toolchain we target.
    std::string tmp(s);
    char* end = nullptr;
    const double v = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size()) {
        throw IngestError(line, "bad vector component '" + tmp + "'");
    }
    return v;
}

} // namespace

void EmbeddingTable::add(const std::string& word, const Eigen::Ref<const Eigen::VectorXd>& vector) {
    if (dimension_ == 0) {
        dimension_ = vector.size();
    }
    if (vector.size() != dimension_) {
        throw ValidationError("embedding for '" + word + "' has dimension " + std::to_string(vector.size()) +
                              ", expected " + std::to_string(dimension_));
    }
    if (!index_.try_emplace(word, index_.size()).second) {
        return;
    }
    data_.insert(data_.end(), vector.data(), vector.data() + vector.size());
}

EmbeddingTable EmbeddingTable::read(std::istream& in, const std::unordered_set<std::string>* vocabulary) {
    EmbeddingTable table;
    std::string line;
    std::size_t line_no = 0;
    Eigen::VectorXd v;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_ws(line);
        if (fields.empty()) {
            continue;
        }
        if (line_no == 1 && fields.size() == 2 && is_integer(fields[0]) && is_integer(fields[1])) {
            table.dimension_ = std::stoll(std::string(fields[1]));
            continue;
        }
        if (fields.size() < 2) {
            throw IngestError(line_no, "embedding line needs a word and at least one component");
        }
        const std::string word(fields[0]);
        if (vocabulary != nullptr && !vocabulary->contains(word)) {
            continue;
        }
        v.resize(static_cast<Eigen::Index>(fields.size() - 1));
        for (std::size_t i = 1; i < fields.size(); ++i) {
            v(static_cast<Eigen::Index>(i - 1)) = parse_component(fields[i], line_no);
        }
        try {
            table.add(word, v);
        } catch (const ValidationError& e) {
            throw IngestError(line_no, e.what());
        }
    }
    return table;
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path,
                                    const std::unordered_set<std::string>* vocabulary) {
    std::ifstream in(path);
    if (!in) {
        throw NotFoundError("cannot open embedding file '" + path.string() + "'");
    }
    return read(in, vocabulary);
}

std::optional<Eigen::VectorXd> EmbeddingTable::lookup(const std::string& word) const {
    auto it = index_.find(word);
    if (it == index_.end()) {
        it = index_.find(fold_case(word));
    }
    if (it == index_.end()) {
        return std::nullopt;
    }
    return Eigen::Map<const Eigen::VectorXd>(data_.data() + it->second * static_cast<std::size_t>(dimension_),
                                             dimension_);
}

std::optional<Eigen::VectorXd> EmbeddingTable::term_vector(const std::string& term) const {
    if (auto v = lookup(term)) {
        return v;
    }
    if (term.find(' ') == std::string::npos) {
        return std::nullopt;
    }
    std::string joined = term;
    for (char& c : joined) {
        if (c == ' ') {
            c = '_';
        }
    }
    if (auto v = lookup(joined)) {
        return v;
    }
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dimension_);
    int found = 0;
    std::istringstream words(term);
    std::string word;
    while (words >> word) {
        if (auto v = lookup(word)) {
            sum += *v;
            ++found;
        }
    }
    if (found == 0) {
        return std::nullopt;
    }
    return Eigen::VectorXd(sum / found);
}

} // namespace termtopics
