"""Integration tests for sa-lab.

These tests drive the shipped scenario files end to end, from parsing through
simulation to the written artifacts.
"""
