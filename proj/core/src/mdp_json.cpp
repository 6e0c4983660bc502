#include "dradp/mdp_json.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dradp {

using nlohmann::json;

TabularMdp mdp_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed MDP JSON: ") + e.what());
    }
    try {
        const auto n = doc.at("n_states").get<Index>();
        const auto na = doc.at("n_actions").get<Index>();
        if (n <= 0 || na <= 0)
            throw std::invalid_argument("n_states and n_actions must be positive");
        const auto& tr = doc.at("transition");
        const auto& rw = doc.at("reward");
        const auto& al = doc.at("alpha");
        if (!tr.is_array() || static_cast<Index>(tr.size()) != na)
            throw std::invalid_argument("transition must have n_actions blocks");
        if (!rw.is_array() || static_cast<Index>(rw.size()) != na)
            throw std::invalid_argument("reward must have n_actions rows");
        if (!al.is_array() || static_cast<Index>(al.size()) != n)
            throw std::invalid_argument("alpha must have n_states entries");

        std::vector<MatrixXd> transitions;
        MatrixXd reward(n, na);
        for (Index a = 0; a < na; ++a) {
            const auto& block = tr[static_cast<std::size_t>(a)];
            if (static_cast<Index>(block.size()) != n)
                throw std::invalid_argument("transition block has the wrong number of rows");
            MatrixXd P(n, n);
            for (Index s = 0; s < n; ++s) {
                const auto& row = block[static_cast<std::size_t>(s)];
                if (static_cast<Index>(row.size()) != n)
                    throw std::invalid_argument("transition row has the wrong length");
                for (Index t = 0; t < n; ++t)
                    P(s, t) = row[static_cast<std::size_t>(t)].get<double>();
            }
            transitions.push_back(std::move(P));
            const auto& rrow = rw[static_cast<std::size_t>(a)];
            if (static_cast<Index>(rrow.size()) != n)
                throw std::invalid_argument("reward row has the wrong length");
            for (Index s = 0; s < n; ++s)
                reward(s, a) = rrow[static_cast<std::size_t>(s)].get<double>();
        }
        VectorXd alpha(n);
        for (Index s = 0; s < n; ++s)
            alpha(s) = al[static_cast<std::size_t>(s)].get<double>();
        return TabularMdp(std::move(transitions), std::move(reward), doc.at("gamma").get<double>(), std::move(alpha));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed MDP JSON: ") + e.what());
    }
}

std::string mdp_to_json(const TabularMdp& mdp) {
    const Index n = mdp.n_states();
    json doc;
    doc["n_states"] = n;
    doc["n_actions"] = mdp.n_actions();
    doc["gamma"] = mdp.gamma();
    doc["alpha"] = std::vector<double>(mdp.alpha().begin(), mdp.alpha().end());
    json tr = json::array();
    json rw = json::array();
    for (Index a = 0; a < mdp.n_actions(); ++a) {
        json block = json::array();
        for (Index s = 0; s < n; ++s) {
            json row = json::array();
            for (Index t = 0; t < n; ++t)
                row.push_back(mdp.transition(a, s, t));
            block.push_back(std::move(row));
        }
        tr.push_back(std::move(block));
        json rrow = json::array();
        for (Index s = 0; s < n; ++s)
            rrow.push_back(mdp.reward(s, a));
        rw.push_back(std::move(rrow));
    }
    doc["transition"] = std::move(tr);
    doc["reward"] = std::move(rw);
    return doc.dump();
}

TabularMdp load_mdp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open MDP file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return mdp_from_json(buf.str());
}

void save_mdp(const TabularMdp& mdp, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw std::invalid_argument("cannot write MDP file: " + path.string());
    out << mdp_to_json(mdp) << '\n';
}

} // namespace dradp
