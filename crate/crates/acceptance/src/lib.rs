//! Empty: the crate exists for its `acceptance` test target.
