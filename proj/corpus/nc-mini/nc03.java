public class Answer {
    public static int tableSum(int rows, int cols) {
        int sum = 0;
        for (int r = 0; r < rows; r++) {
            for (int c = 0; c < cols; c++) {
                sum = sum + r * c;
            }
            sum = sum + 1;
        }
        return sum;
    }
}
