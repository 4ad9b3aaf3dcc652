# Keeps this directory on sys.path so test helpers (liouville_oracle) import
# regardless of the invocation directory.
