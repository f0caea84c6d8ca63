"""
Message templates for log lines and user-facing errors.
"""


class Messages:
    """
    Templates formatted with str.format at the call site.
    """

    # Input files
    FILE_NOT_FOUND = "{kind} file not found: {path}"
    FILE_UNREADABLE = "Could not read {kind} file {path}: {error}"
    FIELD_MISSING = "{kind} entry {index} is missing required field '{field}'"
    FIELD_INVALID = "{kind} entry {index} has invalid '{field}': {value!r}"
    UNKNOWN_RATING = "Unknown rating '{rating}'. Known ratings: {known}"
    UNKNOWN_COUNTERPARTY = "No counterparty profile for '{counterparty}'"
    UNKNOWN_FIELDS = "{kind} ignores unknown fields: {fields}"
    TABLE_VERSION = "Unsupported rating table version {version} in {path}"

    # Settings
    PHI_RANGE = "phi must lie in [0, 1], got {phi}"
    PATHS_TOO_FEW = "At least {minimum} paths are required for table runs, got {paths}"
    POSITIVE = "{name} must be positive, got {value}"

    # Progress
    SIMULATING = "Simulating {paths} paths on {steps} steps (seed {seed}, {workers} workers)"
    PROFILE_BUILT = "Built exposure profile for netting set '{netting_set}' ({trades} trades)"
    SCENARIO_ROW = "Scenario {scenario}: {direction} {rating} phi={phi} total={total:.2f}bp"
    TABLE_WRITTEN = "Wrote {rows} rows to {target}"
