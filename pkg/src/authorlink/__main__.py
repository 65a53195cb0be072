from authorlink.cli import main_entry

main_entry()
