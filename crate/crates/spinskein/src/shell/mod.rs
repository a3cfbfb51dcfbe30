//! DSL, CLI, verification harness. (under construction)
