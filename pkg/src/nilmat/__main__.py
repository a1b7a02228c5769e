from nilmat.cli import main

main()
