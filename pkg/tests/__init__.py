"""Unit tests for larpkit."""
