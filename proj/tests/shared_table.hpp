#pragma once

#include "magspec/degennes.hpp"

// One mu_1 table per test binary (n = 2000 with Richardson, step 0.01 on [-6, 6]).
inline const magspec::Mu1Table& shared_table() {
    static const magspec::Mu1Table table = magspec::Mu1Table::build(-6.0, 6.0, 0.01, 2000, 1, true);
    return table;
}
