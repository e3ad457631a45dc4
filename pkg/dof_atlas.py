from application.cli import main # Import the command line entry point

# Run the dof-atlas command line, e.g. python dof_atlas.py region --channel bc --antennas 4,2,3 --alpha 0.9,0.6
if __name__ == "__main__":
    main()
