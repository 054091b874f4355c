"""
Simulation Package

    - conditional: per-stratum Monte-Carlo (run_conditional_hard / _soft)
    - combine: stratified BLER and E[Q] (combine_hard / _soft), select_ab
    - direct: end-to-end Monte-Carlo for cross-checks
    - pool: process pool over (stratum, trial range) tasks
    - output: versioned CSV / JSON rendering, atomic writes
"""
