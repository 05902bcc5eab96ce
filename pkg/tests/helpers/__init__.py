"""Shared test helpers for bastion tests."""
