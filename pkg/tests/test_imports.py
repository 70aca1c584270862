"""Basic import tests to ensure package structure is valid."""


def test_petalknot_imports():
    """Ensure package can be imported."""
    import petalknot

    assert petalknot.__version__ is not None


def test_core_module_imports():
    """Ensure all core modules import."""
    from petalknot import container, interfaces, petalknot_logging
    from petalknot.cli import build_parser
    from petalknot.config_loader import load_config
    from petalknot.invariants import fingerprint
    from petalknot.tablekit import KnotTable

    assert container is not None
    assert interfaces is not None
    assert petalknot_logging is not None
    assert load_config is not None
    assert build_parser is not None
    assert fingerprint is not None
    assert KnotTable is not None
