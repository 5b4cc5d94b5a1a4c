"""Tests for ramanujan_nagell_certifier."""
