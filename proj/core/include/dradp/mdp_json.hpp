#pragma once

#include "dradp/mdp.hpp"

#include <filesystem>
#include <string>

namespace dradp {

/**
 * MDP interchange format:
 *
 *   {"n_states": int, "n_actions": int, "gamma": float, "alpha": [float],
 *    "transition": [[[float]]], "reward": [[float]]}
 *
 * `transition` is indexed [action][state][next_state] and `reward`
 * [action][state]. Parsing errors and invariant violations both surface as
 * std::invalid_argument.
 */
TabularMdp mdp_from_json(const std::string& text);
std::string mdp_to_json(const TabularMdp& mdp);

TabularMdp load_mdp(const std::filesystem::path& path);
void save_mdp(const TabularMdp& mdp, const std::filesystem::path& path);

} // namespace dradp
