version_core = "1.0"
version_tag = "1.0-3"
