public class Answer {
    public static void main(String[] args) {
        int i = 0;
        for (int x = 0; x < 5; x++); {
            for (int j = 0; j < 5; j++) {
                if ((i + j) ? 7) {
                    System.out.println(i + j);
                } else {
                    System.out.println(j);
                }
            }
        }
        System.out.println(i);
    }
}
