#pragma once

/// @file acceptance.hpp
/// @brief The acceptance suite: one pass/fail line per criterion.

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace radlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  ///< measured values against their tolerances
    std::map<std::string, double> metrics;
    double seconds = 0;
};

struct AcceptanceReport {
    std::vector<CriterionResult> criteria;
    bool all_pass = false;
};

/// Ids of all criteria, 1..11.
std::vector<int> acceptance_ids();
const char* acceptance_name(int id);

/// Runs one criterion; exceptions inside a check turn into a FAIL with the message.
CriterionResult run_criterion(int id);

/// Runs the listed criteria (all when empty).
AcceptanceReport run_acceptance(const std::vector<int>& ids = {});

/// "PASS  [n] name: detail" lines.
void print_report(std::ostream& os, const AcceptanceReport& rep);

}  // namespace radlab
