//! Acceptance criteria of the workspace. The checks live in the
//! `acceptance` test target (`cargo test -p acceptance`), which prints one
//! PASS/FAIL line per criterion.
